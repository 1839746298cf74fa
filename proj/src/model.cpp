#include "omcorr/model.hpp"

#include <cmath>
#include <string>

#include "omcorr/errors.hpp"

namespace omcorr {

std::string_view to_string(Boundary b) {
    return b == Boundary::open ? "open" : "periodic";
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw InvalidParameter("unknown boundary '" + std::string(s) + "' (expected open|periodic)");
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParameter(what);
}

}  // namespace

void validate(const LatticeParams& p) {
    require(p.n_sites >= 1, "n_sites must be >= 1");
    require(p.allow_even_sites || p.n_sites % 2 == 1, "n_sites must be odd (set allow_even_sites to override)");
    for (double x : {p.detuning, p.kappa, p.gamma, p.omega_m, p.g0, p.hop_optical, p.hop_mechanical,
                     p.drive.real(), p.drive.imag(), p.nbar_m}) {
        require(std::isfinite(x), "lattice parameters must be finite");
    }
    require(p.kappa > 0.0, "kappa must be > 0");
    require(p.gamma > 0.0, "gamma must be > 0");
    require(p.omega_m > 0.0, "omega_m must be > 0");
    require(p.g0 >= 0.0, "g0 must be >= 0");
    require(p.nbar_m >= 0.0, "nbar_m must be >= 0");
    require(p.hop_optical == 1.0, "hop_optical must be exactly 1 in normalized units");
}

LatticeParams normalized_from_absolute(const LatticeParams& absolute) {
    const double j = absolute.hop_optical;
    if (!(std::isfinite(j) && j > 0.0)) throw InvalidParameter("absolute hop_optical (J in rad/s) must be > 0");
    LatticeParams p = absolute;
    p.detuning /= j;
    p.kappa /= j;
    p.gamma /= j;
    p.omega_m /= j;
    p.g0 /= j;
    p.hop_mechanical /= j;
    p.drive /= j;
    p.hop_optical = 1.0;
    return p;
}

std::complex<double> drive_from_polar(double magnitude, double phase) {
    return std::polar(magnitude, phase);
}

int SiteIndex::offset(int n_sites) const {
    if (!in_range(n_sites)) {
        throw InvalidParameter("site " + std::to_string(j) + " outside [" + std::to_string(lowest(n_sites)) + ", " +
                               std::to_string(highest(n_sites)) + "]");
    }
    return j - lowest(n_sites);
}

double thermal_occupation(double angular_frequency, double temperature) {
    if (!std::isfinite(angular_frequency) || !std::isfinite(temperature)) {
        throw InvalidParameter("thermal_occupation: non-finite input");
    }
    if (angular_frequency <= 0.0) throw InvalidParameter("thermal_occupation: frequency must be > 0");
    if (temperature < 0.0) throw InvalidParameter("thermal_occupation: temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    const double x = kReducedPlanck * angular_frequency / (kBoltzmann * temperature);
    return 1.0 / std::expm1(x);
}

double temperature_from_occupation(double angular_frequency, double occupancy) {
    if (!std::isfinite(angular_frequency) || !std::isfinite(occupancy)) {
        throw InvalidParameter("temperature_from_occupation: non-finite input");
    }
    if (angular_frequency <= 0.0) throw InvalidParameter("temperature_from_occupation: frequency must be > 0");
    if (occupancy <= 0.0) throw InvalidParameter("temperature_from_occupation: occupancy must be > 0");
    return kReducedPlanck * angular_frequency / (kBoltzmann * std::log1p(1.0 / occupancy));
}

}  // namespace omcorr
