#include "omcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "omcorr/errors.hpp"
#include "omcorr/parallel.hpp"

namespace omcorr {

std::string_view to_string(Species s) { return s == Species::photon ? "photon" : "phonon"; }

std::string_view to_string(Measure m) { return m == Measure::negativity ? "negativity" : "discord"; }

std::string_view to_string(LogBase b) {
    switch (b) {
        case LogBase::ten: return "10";
        case LogBase::two: return "2";
        case LogBase::natural: return "e";
    }
    return "10";
}

Species species_from_string(std::string_view s) {
    if (s == "photon") return Species::photon;
    if (s == "phonon") return Species::phonon;
    throw InvalidParameter("unknown species '" + std::string(s) + "' (expected photon|phonon)");
}

Measure measure_from_string(std::string_view s) {
    if (s == "negativity") return Measure::negativity;
    if (s == "discord") return Measure::discord;
    throw InvalidParameter("unknown measure '" + std::string(s) + "' (expected negativity|discord)");
}

LogBase log_base_from_string(std::string_view s) {
    if (s == "10") return LogBase::ten;
    if (s == "2") return LogBase::two;
    if (s == "e" || s == "natural") return LogBase::natural;
    throw InvalidParameter("unknown log base '" + std::string(s) + "' (expected 10|2|e)");
}

int ModeRef::quadrature_row(int n_sites) const {
    return 4 * site.offset(n_sites) + (species == Species::photon ? 0 : 2);
}

ReducedCM::ReducedCM(const Eigen::Matrix4d& m) : m_(m), scaled_(invariants_of(2.0 * m)) {}

TwoModeInvariants ReducedCM::invariants_of(const Eigen::Matrix4d& m) {
    Eigen::Matrix2d j;
    j << 0.0, 1.0, -1.0, 0.0;
    const Eigen::Matrix2d va = m.topLeftCorner<2, 2>();
    const Eigen::Matrix2d vb = m.bottomRightCorner<2, 2>();
    const Eigen::Matrix2d vc = m.topRightCorner<2, 2>();
    TwoModeInvariants inv;
    inv.a = va.determinant();
    inv.b = vb.determinant();
    inv.c = vc.determinant();
    inv.t = (va * j * vc * j * vb * j * vc.transpose() * j).trace();
    inv.d = inv.a * inv.b + inv.c * inv.c - inv.t;
    return inv;
}

ReducedCM ReducedCM::swapped() const {
    Eigen::Matrix4d s;
    s << block_b(), block_c().transpose(), block_c(), block_a();
    return ReducedCM(s);
}

ReducedCM reduce(const CovarianceMatrix& v, const ModeRef& m1, const ModeRef& m2) {
    if (m1 == m2) throw InvalidParameter("reduce: the two modes must differ");
    if (v.dim() != 4 * v.n_sites) throw InvalidParameter("reduce: covariance dimension does not match n_sites");
    const int r1 = m1.quadrature_row(v.n_sites);
    const int r2 = m2.quadrature_row(v.n_sites);
    const int idx[4] = {r1, r1 + 1, r2, r2 + 1};
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m(i, j) = v.matrix(idx[i], idx[j]);
    }
    return ReducedCM(m);
}

namespace {

constexpr double kDiscriminantTol = 1e-12;
constexpr double kEntropyArgTol = 1e-9;
constexpr double kBranchCutoff = 1e-12;

// Clamps tiny negative discriminants (relative to `scale`) to zero.
double checked_discriminant(double disc, double scale, const char* what) {
    if (disc >= 0.0) return disc;
    if (disc >= -kDiscriminantTol * std::max(1.0, scale)) return 0.0;
    throw PhysicalityError(std::string(what) + ": negative discriminant " + std::to_string(disc));
}

double log_of(LogBase base) {
    switch (base) {
        case LogBase::ten: return std::log(10.0);
        case LogBase::two: return std::log(2.0);
        case LogBase::natural: return 1.0;
    }
    return 1.0;
}

}  // namespace

double log_negativity(const ReducedCM& r) {
    const auto inv = r.invariants();
    const double sigma = inv.a + inv.b - 2.0 * inv.c;
    // sigma^2 - 4d, expanded so that it vanishes exactly for uncorrelated modes.
    const double raw = (inv.a - inv.b) * (inv.a - inv.b) - 4.0 * inv.c * (inv.a + inv.b) + 4.0 * inv.t;
    const double disc = checked_discriminant(raw, sigma * sigma, "log_negativity");
    const double inner = sigma - std::sqrt(disc);
    if (inner < 0.0) throw PhysicalityError("log_negativity: partially transposed state has imaginary spectrum");
    const double twice_nu = 2.0 * std::sqrt(0.5 * inner);
    if (twice_nu >= 1.0) return 0.0;
    return -std::log(twice_nu);
}

double entropy_function(double x, LogBase base) {
    if (!(x >= 1.0 - kEntropyArgTol)) {
        throw PhysicalityError("entropy function argument " + std::to_string(x) + " below 1");
    }
    if (x <= 1.0) return 0.0;
    // With y = (x-1)/2: (1+y) ln(1+y) - y ln y; log1p keeps the x -> 1 limit accurate.
    const double y = 0.5 * (x - 1.0);
    return ((1.0 + y) * std::log1p(y) - y * std::log(y)) / log_of(base);
}

double gaussian_discord_directional(const ReducedCM& r, DiscordDirection dir, LogBase base) {
    auto [a, b, c, d, t] = r.discord_invariants();
    if (dir == DiscordDirection::b) std::swap(a, b);

    const double sigma = a + b + 2.0 * c;
    const double raw = (a - b) * (a - b) + 4.0 * c * (a + b) + 4.0 * t;
    const double root = std::sqrt(checked_discriminant(raw, sigma * sigma, "discord"));
    const double nu_minus = std::sqrt(std::max(0.0, 0.5 * (sigma - root)));
    const double nu_plus = std::sqrt(0.5 * (sigma + root));

    const double c2 = c * c;
    const double dab = c2 - t;  // d - ab without cancellation
    double eps = 0.0;
    const bool first_branch = c2 >= kBranchCutoff && std::abs(b - 1.0) > kBranchCutoff &&
                              dab * dab <= (1.0 + b) * c2 * (a + d);
    if (first_branch) {
        const double inner = checked_discriminant(c2 + (b - 1.0) * (d - a), c2, "discord");
        eps = (2.0 * c2 + (b - 1.0) * (d - a) + 2.0 * std::abs(c) * std::sqrt(inner)) / ((b - 1.0) * (b - 1.0));
    } else {
        const double scale = std::max(c2 * c2, dab * dab);
        const double inner =
            checked_discriminant(c2 * c2 + dab * dab - 2.0 * c2 * (d + a * b), scale, "discord");
        eps = (a * b - c2 + d - std::sqrt(inner)) / (2.0 * b);
    }
    if (eps < 0.0) throw PhysicalityError("discord: negative conditional determinant");

    return entropy_function(std::sqrt(b), base) - entropy_function(nu_minus, base) -
           entropy_function(nu_plus, base) + entropy_function(std::sqrt(eps), base);
}

double symmetrized_discord(const ReducedCM& r, LogBase base) {
    return std::max({0.0, gaussian_discord_directional(r, DiscordDirection::a, base),
                     gaussian_discord_directional(r, DiscordDirection::b, base)});
}

CorrelationResult correlate(const ReducedCM& r, LogBase base) {
    CorrelationResult out;
    out.e_n = log_negativity(r);
    out.discord_a = std::max(0.0, gaussian_discord_directional(r, DiscordDirection::a, base));
    out.discord_b = std::max(0.0, gaussian_discord_directional(r, DiscordDirection::b, base));
    out.discord_sym = std::max(out.discord_a, out.discord_b);
    return out;
}

CorrelationMap correlation_map(const CovarianceMatrix& v, Species a, Species b, Measure measure, LogBase base,
                               int threads) {
    const int n = v.n_sites;
    CorrelationMap map;
    map.n_sites = n;
    map.species_a = a;
    map.species_b = b;
    map.measure = measure;
    map.values.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::vector<CorrelationMap::EntryError>> row_errors(static_cast<std::size_t>(n));

    detail::parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
        const int i = static_cast<int>(row);
        for (int j = 0; j < n; ++j) {
            if (map.is_sentinel(i, j)) continue;
            const ModeRef ma{SiteIndex::from_offset(i, n), a};
            const ModeRef mb{SiteIndex::from_offset(j, n), b};
            try {
                const ReducedCM r = reduce(v, ma, mb);
                map.values[row * n + j] =
                    measure == Measure::negativity ? log_negativity(r) : symmetrized_discord(r, base);
            } catch (const std::exception& e) {
                row_errors[row].push_back({i, j, e.what()});
            }
        }
    });
    for (auto& errs : row_errors) map.errors.insert(map.errors.end(), errs.begin(), errs.end());
    return map;
}

}  // namespace omcorr
