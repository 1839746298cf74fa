#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "omcorr/model.hpp"
#include "omcorr/steadystate.hpp"

namespace omcorr {

enum class Species { photon, phonon };
enum class Measure { negativity, discord };
enum class DiscordDirection { a, b };
enum class LogBase { ten, two, natural };

std::string_view to_string(Species s);
std::string_view to_string(Measure m);
std::string_view to_string(LogBase b);
Species species_from_string(std::string_view s);
Measure measure_from_string(std::string_view s);
LogBase log_base_from_string(std::string_view s);

/// One bosonic mode of the lattice: photon -> (X, Y), phonon -> (x, y).
struct ModeRef {
    SiteIndex site;
    Species species = Species::photon;

    /// Row of the first quadrature of this mode in the 4N covariance matrix.
    int quadrature_row(int n_sites) const;

    friend bool operator==(const ModeRef&, const ModeRef&) = default;
};

/// Symplectic invariants (det V_A, det V_B, det V_C, det V_R), plus the mixed
/// term t = tr(V_A J V_C J V_B J V_C^T J) with J = [[0, 1], [-1, 0]]. The 4x4
/// determinant is formed as d = ab + c^2 - t, so ab + c^2 - d is exact when the
/// modes are uncorrelated and discriminants stay free of cancellation.
struct TwoModeInvariants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double t = 0.0;
};

/// Two-mode covariance matrix [[V_A, V_C], [V_C^T, V_B]] in the vacuum = 1/2
/// convention.
class ReducedCM {
public:
    ReducedCM() : ReducedCM(Eigen::Matrix4d::Identity() * kVacuumVariance) {}
    explicit ReducedCM(const Eigen::Matrix4d& m);

    const Eigen::Matrix4d& matrix() const { return m_; }
    Eigen::Matrix2d block_a() const { return m_.topLeftCorner<2, 2>(); }
    Eigen::Matrix2d block_b() const { return m_.bottomRightCorner<2, 2>(); }
    Eigen::Matrix2d block_c() const { return m_.topRightCorner<2, 2>(); }

    /// Invariants of the unscaled matrix.
    TwoModeInvariants invariants() const { return invariants_of(m_); }
    /// Invariants of 2V (vacuum = 1), used by the discord formulas.
    const TwoModeInvariants& discord_invariants() const { return scaled_; }

    /// The same state with the roles of the two modes exchanged.
    ReducedCM swapped() const;

    static TwoModeInvariants invariants_of(const Eigen::Matrix4d& m);

private:
    Eigen::Matrix4d m_;
    TwoModeInvariants scaled_;
};

struct CorrelationResult {
    double e_n = 0.0;
    double discord_a = 0.0;
    double discord_b = 0.0;
    double discord_sym = 0.0;
};

/// Reduced CM of (m1, m2), m1 first. Throws InvalidParameter on identical or
/// out-of-range modes.
ReducedCM reduce(const CovarianceMatrix& v, const ModeRef& m1, const ModeRef& m2);

/// Logarithmic negativity max{0, -ln 2 nu_-} of the partially transposed state.
double log_negativity(const ReducedCM& r);

/// f(x) = ((x+1)/2) log((x+1)/2) - ((x-1)/2) log((x-1)/2) for x >= 1.
double entropy_function(double x, LogBase base = LogBase::ten);

/// Gaussian discord with the second mode measured (direction a) or the first
/// mode measured (direction b). Raw value; may be slightly negative from
/// round-off.
double gaussian_discord_directional(const ReducedCM& r, DiscordDirection dir,
                                    LogBase base = LogBase::ten);

/// max of the two directional discords, clamped at zero.
double symmetrized_discord(const ReducedCM& r, LogBase base = LogBase::ten);

CorrelationResult correlate(const ReducedCM& r, LogBase base = LogBase::ten);

/// N x N map between (site i, species_a) and (site j, species_b), row-major
/// by site offset. Same-species diagonal entries are NaN sentinels.
struct CorrelationMap {
    struct EntryError {
        int row = 0;
        int col = 0;
        std::string message;
    };

    int n_sites = 0;
    Species species_a = Species::photon;
    Species species_b = Species::phonon;
    Measure measure = Measure::negativity;
    std::vector<double> values;
    std::vector<EntryError> errors;

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * n_sites + col]; }
    bool is_sentinel(int row, int col) const { return species_a == species_b && row == col; }
};

CorrelationMap correlation_map(const CovarianceMatrix& v, Species a, Species b, Measure measure,
                               LogBase base = LogBase::ten, int threads = 1);

}  // namespace omcorr
