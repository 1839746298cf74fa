#include "omcorr/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "omcorr/errors.hpp"

namespace omcorr {

std::string_view to_string(BranchNote b) {
    return b == BranchNote::unique ? "unique" : "multistable_lowest";
}

BranchNote branch_note_from_string(std::string_view s) {
    if (s == "unique") return BranchNote::unique;
    if (s == "multistable_lowest") return BranchNote::multistable_lowest;
    throw InvalidParameter("unknown branch note '" + std::string(s) + "'");
}

namespace detail {

namespace {

double polish_root(double a, double b, double c, double d, double x) {
    for (int it = 0; it < 40; ++it) {
        const double f = ((a * x + b) * x + c) * x + d;
        const double df = (3.0 * a * x + 2.0 * b) * x + c;
        if (f == 0.0 || df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
    return x;
}

// Roots of the depressed cubic t^3 + p t + q.
std::vector<double> depressed_roots(double p, double q) {
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        const double s = std::cbrt(0.5 * std::abs(q) + std::sqrt(disc));
        const double u = q > 0.0 ? -s : s;
        return {u == 0.0 ? 0.0 : u - p / (3.0 * u)};
    }
    if (p == 0.0) return {0.0};
    const double r = std::sqrt(-p / 3.0);
    const double arg = std::clamp((3.0 * q / (2.0 * p)) * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    constexpr double third = 2.0 * std::numbers::pi / 3.0;
    return {2.0 * r * std::cos(phi), 2.0 * r * std::cos(phi - third), 2.0 * r * std::cos(phi - 2.0 * third)};
}

}  // namespace

std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
    if (a == 0.0) throw InvalidParameter("real_cubic_roots: leading coefficient is zero");
    const double scale = std::max({std::abs(b), std::abs(c), std::abs(d)});
    std::vector<double> guesses;
    if (std::abs(a) < 1e-13 * scale && b != 0.0) {
        // Near-degenerate: the quadratic part fixes the finite roots, one root sits near -b/a.
        const double disc = c * c - 4.0 * b * d;
        if (disc >= 0.0) {
            const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
            if (q != 0.0) guesses.push_back(d / q);
            guesses.push_back(q / b);
        }
        guesses.push_back(-b / a);
    } else {
        const double bb = b / a;
        const double cc = c / a;
        const double dd = d / a;
        const double p = cc - bb * bb / 3.0;
        const double q = 2.0 * bb * bb * bb / 27.0 - bb * cc / 3.0 + dd;
        for (double t : depressed_roots(p, q)) guesses.push_back(t - bb / 3.0);
    }
    std::vector<double> roots;
    for (double g : guesses) {
        const double x = polish_root(a, b, c, d, g);
        if (std::isfinite(x)) roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    auto same = [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(std::abs(x), std::abs(y)); };
    roots.erase(std::unique(roots.begin(), roots.end(), same), roots.end());
    return roots;
}

}  // namespace detail

namespace {

struct CubicCoefficients {
    double bare_detuning;  // Delta + 2J
    double nonlinearity;   // 2 g0 c
    double eta2;
};

CubicCoefficients cubic_of(const LatticeParams& p) {
    const double w = p.omega_m - 2.0 * p.hop_mechanical;
    const double c = p.g0 * w / (w * w + p.gamma * p.gamma);
    return {p.detuning + 2.0 * p.hop_optical, 2.0 * p.g0 * c, std::norm(p.drive)};
}

}  // namespace

double photon_number_residual(const LatticeParams& p, double photon_number) {
    const auto k = cubic_of(p);
    const double eff = k.bare_detuning + k.nonlinearity * photon_number;
    return photon_number * (eff * eff + p.kappa * p.kappa) - k.eta2;
}

std::vector<double> photon_number_roots(const LatticeParams& p) {
    const auto k = cubic_of(p);
    if (k.eta2 == 0.0) return {};
    const double linear = k.bare_detuning * k.bare_detuning + p.kappa * p.kappa;
    if (k.nonlinearity == 0.0) return {k.eta2 / linear};

    // P = s u with s the linear-cavity photon number gives e u^3 + f u^2 + u - 1 = 0.
    const double s = k.eta2 / linear;
    const double e = k.nonlinearity * k.nonlinearity * s * s / linear;
    const double f = 2.0 * k.bare_detuning * k.nonlinearity * s / linear;
    std::vector<double> roots;
    for (double u : detail::real_cubic_roots(e, f, 1.0, -1.0)) {
        if (u > 0.0) roots.push_back(s * u);
    }
    return roots;
}

double effective_detuning(const LatticeParams& p, const MeanFields& mf) {
    return p.detuning + 2.0 * p.g0 * mf.beta.real();
}

MeanFields solve_mean_fields(const LatticeParams& p) {
    validate(p);
    MeanFields mf;
    if (std::norm(p.drive) == 0.0) return mf;

    const auto roots = photon_number_roots(p);
    if (roots.empty()) {
        throw SolverFailure("mean fields: no positive root of the photon-number cubic");
    }
    double photons = roots.front();

    // One Newton step on the unscaled cubic.
    const auto k = cubic_of(p);
    const double eff = k.bare_detuning + k.nonlinearity * photons;
    const double slope = eff * eff + p.kappa * p.kappa + 2.0 * k.nonlinearity * photons * eff;
    if (slope != 0.0) photons -= photon_number_residual(p, photons) / slope;

    const std::complex<double> mech_denominator{p.omega_m - 2.0 * p.hop_mechanical, -p.gamma};
    mf.beta = p.g0 * photons / mech_denominator;
    const std::complex<double> opt_denominator{p.detuning + 2.0 * p.hop_optical + 2.0 * p.g0 * mf.beta.real(),
                                               p.kappa};
    mf.alpha = std::complex<double>{0.0, 1.0} * p.drive / opt_denominator;
    mf.photon_number = std::norm(mf.alpha);
    mf.branch_note = roots.size() > 1 ? BranchNote::multistable_lowest : BranchNote::unique;
    mf.converged = std::abs(photon_number_residual(p, photons)) <= 1e-12 * k.eta2 &&
                   std::abs(mf.photon_number - photons) <= 1e-12 * photons;
    return mf;
}

}  // namespace omcorr
