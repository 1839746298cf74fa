#pragma once

#include <complex>
#include <string_view>

namespace omcorr {

enum class Boundary { open, periodic };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

/// Physical constants of a uniform 1-D optomechanical array.
///
/// All rates are in units of the photon hopping J (hop_optical == 1). Use
/// normalized_from_absolute() to ingest rates given in rad/s.
/// Each site carries one optical and one mechanical mode; quadratures are
/// ordered [X_j, Y_j, x_j, y_j] per site.
struct LatticeParams {
    int n_sites = 1;
    double detuning = 0.0;         ///< laser minus cavity frequency
    double kappa = 0.1;            ///< optical amplitude decay
    double gamma = 0.002;          ///< mechanical amplitude decay
    double omega_m = 0.1;          ///< mechanical frequency
    double g0 = 0.0;               ///< single-photon optomechanical coupling
    double hop_optical = 1.0;      ///< J
    double hop_mechanical = 0.05;  ///< K
    std::complex<double> drive{0.0, 0.0};
    double nbar_m = 0.0;           ///< thermal phonon occupancy of the bath
    Boundary boundary = Boundary::open;
    bool allow_even_sites = false;

    double drive_magnitude() const { return std::abs(drive); }
    double drive_phase() const { return std::arg(drive); }
    int quadrature_dim() const { return 4 * n_sites; }
};

/// Throws InvalidParameter unless every invariant of LatticeParams holds.
void validate(const LatticeParams& p);

/// Rates in rad/s (hop_optical holding J in rad/s) rescaled so that J = 1.
/// n_sites, nbar_m and the drive phase pass through unchanged.
LatticeParams normalized_from_absolute(const LatticeParams& absolute);

/// Convenience constructor for the drive: magnitude |eta| and phase in radians.
std::complex<double> drive_from_polar(double magnitude, double phase = 0.0);

/// Signed lattice label j. For odd N the labels are -(N-1)/2 .. (N-1)/2, for
/// even N -N/2 .. N/2-1.
struct SiteIndex {
    int j = 0;

    static int lowest(int n_sites) { return -(n_sites / 2); }
    static int highest(int n_sites) { return lowest(n_sites) + n_sites - 1; }
    static SiteIndex from_offset(int offset, int n_sites) { return {offset + lowest(n_sites)}; }

    bool in_range(int n_sites) const { return j >= lowest(n_sites) && j <= highest(n_sites); }
    /// Zero-based array offset; throws InvalidParameter when out of range.
    int offset(int n_sites) const;

    friend bool operator==(SiteIndex, SiteIndex) = default;
};

inline constexpr double kReducedPlanck = 1.054571817e-34;  // J s
inline constexpr double kBoltzmann = 1.380649e-23;         // J / K

/// Bose occupancy 1/(exp(hbar w / k_B T) - 1); w in rad/s, T in kelvin.
double thermal_occupation(double angular_frequency, double temperature);

/// Inverse of thermal_occupation in the temperature argument.
double temperature_from_occupation(double angular_frequency, double occupancy);

}  // namespace omcorr
