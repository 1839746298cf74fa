// Acceptance suite: one PASS/FAIL line per criterion.
//
//   omcorr_acceptance                 run every criterion
//   omcorr_acceptance --criterion X   run one
//   omcorr_acceptance --list          list criterion names

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "omcorr/errors.hpp"
#include "omcorr/sweep.hpp"

using namespace omcorr;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

LatticeParams reference(double detuning, double drive, double nbar = 0.0, int n_sites = 101) {
    LatticeParams p;
    p.n_sites = n_sites;
    p.detuning = detuning;
    p.kappa = 0.1;
    p.gamma = 0.002;
    p.omega_m = 0.1;
    p.g0 = 1e-4;
    p.hop_mechanical = 0.05;
    p.drive = {drive, 0.0};
    p.nbar_m = nbar;
    return p;
}

CovarianceMatrix stable_covariance(const LatticeParams& p) {
    PointSolution s = solve_point(p);
    if (!s.covariance) {
        throw NoSteadyState("no steady state at detuning " + fmt(p.detuning) + ", drive " +
                            fmt(std::abs(p.drive)) + ": " + s.error);
    }
    return std::move(*s.covariance);
}

double pair_value(const CovarianceMatrix& v, ModeRef a, ModeRef b, Measure m) {
    const ReducedCM r = reduce(v, a, b);
    return m == Measure::negativity ? log_negativity(r) : symmetrized_discord(r);
}

ModeRef photon(int j) { return {SiteIndex{j}, Species::photon}; }
ModeRef phonon(int j) { return {SiteIndex{j}, Species::phonon}; }

std::string join(const std::vector<double>& xs, int digits = 4) {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : ", ") + fmt(x, digits);
    return "[" + s + "]";
}

// Every parameter point used by the criteria below.
std::vector<LatticeParams> reproduction_points() {
    std::vector<LatticeParams> pts;
    for (double det : {-2.5, -2.1, -1.7, -1.3}) pts.push_back(reference(det, 15.0));
    for (double eta : {50.0, 150.0, 250.0, 350.0}) pts.push_back(reference(1.5, eta));
    for (int k = 0; k <= 50; ++k) pts.push_back(reference(-2.1, 15.0, k * 0.02));
    pts.push_back(reference(1.5, 500.0));
    pts.push_back(reference(-1.5, 120.0));
    for (double n : {0.1, 0.5, 2.5, 12.5}) pts.push_back(reference(1.5, 500.0, n));
    return pts;
}

// ---------------------------------------------------------------------------

Outcome thermal_conversions() {
    const double w = 2.0 * std::numbers::pi * 9e9;
    const double n015 = thermal_occupation(w, 0.15);
    bool ok = std::abs(n015 - 0.060) <= 0.002;
    std::string detail = "nbar(0.15 K)=" + fmt(n015, 5);
    const std::pair<double, double> tabulated[] = {{0.1, 0.18}, {0.5, 0.39}, {2.5, 1.28}, {12.5, 5.59}};
    for (auto [n, t] : tabulated) {
        const double t_calc = temperature_from_occupation(w, n);
        const double n_calc = thermal_occupation(w, t);
        const bool pair_ok = std::abs(t_calc / t - 1.0) <= 0.03 && std::abs(n_calc / n - 1.0) <= 0.03;
        ok = ok && pair_ok;
        detail += "; " + fmt(n) + "->" + fmt(t_calc, 3) + " K, " + fmt(t) + " K->" + fmt(n_calc, 3);
    }
    return {ok, detail};
}

Outcome oracle_equivalence() {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0, worst_residual = 0.0;
    int draws = 0, rejected = 0;

    auto compare = [&](const LatticeParams& p) {
        const DriftMatrix a = assemble_drift(p, solve_mean_fields(p));
        const StabilityReport st = classify_stability(a);
        if (!st.stable) return false;
        const Eigen::MatrixXd d = assemble_diffusion(p).dense();
        const LyapunovSolution fast = solve_lyapunov(a.matrix, d);
        const LyapunovSolution dense = solve_lyapunov_vectorized(a.matrix, d);
        const double tau = 1.0 / std::abs(st.spectral_abscissa);
        const LyapunovSolution flow = integrate_to_steady_state(a.matrix, d, tau, 1e5 * tau, 1e-11);
        worst = std::max({worst, (fast.v - dense.v).cwiseAbs().maxCoeff(), (fast.v - flow.v).cwiseAbs().maxCoeff(),
                          (dense.v - flow.v).cwiseAbs().maxCoeff()});
        worst_residual = std::max(worst_residual, fast.relative_residual);
        return true;
    };

    for (int n : {1, 2, 3}) {
        int kept = 0;
        while (kept < 8) {
            LatticeParams p;
            p.n_sites = n;
            p.allow_even_sites = true;
            p.detuning = -3.0 + 6.0 * u(rng);
            p.kappa = 0.05 + 0.45 * u(rng);
            p.gamma = 0.002 + 0.05 * u(rng);
            p.omega_m = 0.05 + 0.5 * u(rng);
            p.g0 = 1e-3 * u(rng);
            p.hop_mechanical = 0.1 * u(rng);
            p.drive = drive_from_polar(60.0 * u(rng), 2.0 * std::numbers::pi * u(rng));
            p.nbar_m = 3.0 * u(rng);
            if (compare(p)) {
                ++kept;
                ++draws;
            } else {
                ++rejected;
            }
        }
    }
    int ref_points = 0;
    for (int n : {1, 2, 3}) {
        for (double det : {-2.5, -2.1, -1.7, -1.3}) {
            LatticeParams p = reference(det, 15.0, 0.0, n);
            p.allow_even_sites = true;
            ref_points += compare(p) ? 1 : 0;
        }
    }
    // Production-size residuals.
    for (double det : {-2.5, -1.3}) {
        worst_residual = std::max(worst_residual, solve_point(reference(det, 15.0)).lyapunov_residual);
    }
    const bool ok = draws >= 20 && ref_points == 12 && worst <= 1e-6 && worst_residual <= 1e-8;
    return {ok, std::to_string(draws) + " random draws (" + std::to_string(rejected) + " unstable skipped), " +
                    std::to_string(ref_points) + "/12 reference points; max entry diff " + fmt(worst, 3) +
                    ", max residual " + fmt(worst_residual, 3)};
}

Outcome physicality() {
    double min_nu = std::numeric_limits<double>::infinity();
    double worst_residual = 0.0;
    int solved = 0;
    for (const LatticeParams& p : reproduction_points()) {
        const PointSolution s = solve_point(p);
        if (!s.covariance) return {false, "no steady state at a reproduction point: " + s.error};
        min_nu = std::min(min_nu, physicality_check(s.covariance->matrix).min_symplectic_eigenvalue);
        worst_residual = std::max(worst_residual, s.lyapunov_residual);
        ++solved;
    }
    const bool ok = min_nu >= kVacuumVariance - kPhysicalityTol && worst_residual <= kLyapunovResidualTol;
    return {ok, std::to_string(solved) + " N=101 points, min symplectic eigenvalue " + fmt(min_nu, 12) +
                    ", max residual " + fmt(worst_residual, 3)};
}

Outcome decoupling() {
    double worst = 0.0;
    int maps = 0;
    for (double nbar : {0.0, 0.5, 12.5}) {
        LatticeParams p = reference(-2.5, 15.0, nbar);
        p.g0 = 0.0;
        const CovarianceMatrix v = stable_covariance(p);
        for (auto [a, b] : {std::pair{Species::photon, Species::phonon}, {Species::photon, Species::photon},
                            {Species::phonon, Species::phonon}, {Species::phonon, Species::photon}}) {
            for (Measure m : {Measure::negativity, Measure::discord}) {
                const CorrelationMap map = correlation_map(v, a, b, m, LogBase::ten, worker_count());
                if (!map.errors.empty()) return {false, "map error: " + map.errors.front().message};
                for (int i = 0; i < map.n_sites; ++i)
                    for (int j = 0; j < map.n_sites; ++j)
                        if (!map.is_sentinel(i, j)) worst = std::max(worst, std::abs(map.at(i, j)));
                ++maps;
            }
        }
    }
    return {worst <= 1e-10, std::to_string(maps) + " maps (nbar 0, 0.5, 12.5), max |value| " + fmt(worst, 3)};
}

Outcome entanglement_range_vs_detuning() {
    bool onsite_ok = true;
    std::vector<double> ranges;
    std::string detail;
    for (double det : {-2.5, -2.1, -1.7, -1.3}) {
        const CovarianceMatrix v = stable_covariance(reference(det, 15.0));
        const double e0 = pair_value(v, photon(0), phonon(0), Measure::negativity);
        const double em = pair_value(v, photon(-50), phonon(-50), Measure::negativity);
        const double ep = pair_value(v, photon(50), phonon(50), Measure::negativity);
        onsite_ok = onsite_ok && e0 > 0.0 && em > 0.0 && ep > 0.0;
        int range = 0;
        for (int j = -50; j <= 50; ++j) range += pair_value(v, photon(0), phonon(j), Measure::negativity) > 1e-9;
        ranges.push_back(range);
        detail += "D=" + fmt(det) + ": EN(0,0)=" + fmt(e0, 3) + " EN(+-50)=" + fmt(em, 3) + "/" + fmt(ep, 3) +
                  " range=" + std::to_string(range) + "; ";
    }
    const bool ranges_ok = std::is_sorted(ranges.begin(), ranges.end());
    detail += std::string("on-site ") + (onsite_ok ? "ok" : "FAILED") + ", range sequence " + join(ranges) +
              (ranges_ok ? " non-decreasing" : " NOT non-decreasing");
    return {onsite_ok && ranges_ok, detail};
}

Outcome same_species() {
    double worst_photon = 0.0, worst_phonon = 0.0;
    std::string where;
    std::vector<LatticeParams> pts;
    for (double det : {-2.5, -2.1, -1.7, -1.3}) pts.push_back(reference(det, 15.0));
    for (double eta : {50.0, 150.0, 250.0, 350.0}) pts.push_back(reference(1.5, eta));
    for (const LatticeParams& p : pts) {
        const CovarianceMatrix v = stable_covariance(p);
        for (Species s : {Species::photon, Species::phonon}) {
            const CorrelationMap map = correlation_map(v, s, s, Measure::negativity, LogBase::ten, worker_count());
            if (!map.errors.empty()) return {false, "map error: " + map.errors.front().message};
            double mx = 0.0;
            for (int i = 0; i < map.n_sites; ++i)
                for (int j = 0; j < map.n_sites; ++j)
                    if (!map.is_sentinel(i, j)) mx = std::max(mx, map.at(i, j));
            double& worst = s == Species::photon ? worst_photon : worst_phonon;
            if (mx > 1e-10) where += std::string(to_string(s)) + " D=" + fmt(p.detuning) + " eta=" +
                                     fmt(std::abs(p.drive)) + " max " + fmt(mx, 3) + "; ";
            worst = std::max(worst, mx);
        }
    }
    const bool ok = worst_photon <= 1e-10 && worst_phonon <= 1e-10;
    return {ok, "max photon-photon EN " + fmt(worst_photon, 3) + ", max phonon-phonon EN " + fmt(worst_phonon, 3) +
                    (where.empty() ? "" : "; violations: " + where)};
}

Outcome onsite_vs_drive() {
    std::vector<double> en;
    for (double eta : {50.0, 150.0, 250.0, 350.0}) {
        en.push_back(pair_value(stable_covariance(reference(1.5, eta)), photon(0), phonon(0), Measure::negativity));
    }
    bool interior_max = false;
    for (std::size_t k = 1; k + 1 < en.size(); ++k) {
        interior_max = interior_max || (en[k] > en[k - 1] && en[k] >= en[k + 1]);
    }
    return {interior_max, "EN(j=0) at eta 50,150,250,350: " + join(en)};
}

Outcome edge_vs_heating() {
    std::vector<double> lo, hi;
    for (int k = 0; k <= 50; ++k) {
        const CovarianceMatrix v = stable_covariance(reference(-2.1, 15.0, k * 0.02));
        lo.push_back(pair_value(v, photon(-50), phonon(-50), Measure::negativity));
        hi.push_back(pair_value(v, photon(50), phonon(50), Measure::negativity));
    }
    auto check = [](const std::vector<double>& e) {
        bool mono = true;
        for (std::size_t k = 1; k < e.size(); ++k) mono = mono && e[k] <= e[k - 1] + 1e-12;
        return mono && e[3] > 0.0 && e.back() < 1e-6;
    };
    std::size_t zero_at = 0;
    while (zero_at < lo.size() && lo[zero_at] > 0.0) ++zero_at;
    const bool ok = check(lo) && check(hi);
    return {ok, "edge sites -50/+50 over nbar 0:0.02:1: EN(0)=" + fmt(lo[0], 3) + "/" + fmt(hi[0], 3) +
                    ", EN(0.06)=" + fmt(lo[3], 3) + "/" + fmt(hi[3], 3) + ", EN(1)=" + fmt(lo.back(), 3) + "/" +
                    fmt(hi.back(), 3) + ", first zero at nbar=" + fmt(zero_at * 0.02)};
}

Outcome long_range() {
    const CovarianceMatrix v = stable_covariance(reference(1.5, 500.0));
    const double dg = pair_value(v, photon(0), phonon(50), Measure::discord);
    const double en = pair_value(v, photon(0), phonon(50), Measure::negativity);
    bool ok = dg > 1e-6 && en == 0.0;
    std::string detail = "D=1.5 eta=500: DG(photon 0, phonon 50)=" + fmt(dg, 3) + " EN=" + fmt(en, 3);

    const CovarianceMatrix w = stable_covariance(reference(-1.5, 120.0));
    for (Species s : {Species::photon, Species::phonon}) {
        const CorrelationMap map = correlation_map(w, s, s, Measure::discord, LogBase::ten, worker_count());
        double mx = 0.0;
        int nonzero = 0;
        for (int i = 0; i < map.n_sites; ++i) {
            for (int j = 0; j < map.n_sites; ++j) {
                if (map.is_sentinel(i, j)) continue;
                mx = std::max(mx, map.at(i, j));
                nonzero += map.at(i, j) > 1e-10;
            }
        }
        ok = ok && map.errors.empty() && nonzero > 0;
        detail += "; D=-1.5 eta=120 " + std::string(to_string(s)) + "-" + std::string(to_string(s)) +
                  " DG max " + fmt(mx, 3) + " (" + std::to_string(nonzero) + " off-diagonal entries > 1e-10)";
    }
    return {ok, detail};
}

Outcome discord_heating() {
    std::vector<double> dg;
    for (double n : {0.0, 0.1, 0.5, 2.5, 12.5}) {
        dg.push_back(pair_value(stable_covariance(reference(1.5, 500.0, n)), photon(0), phonon(0), Measure::discord));
    }
    // An interior local maximum later followed by an interior local minimum.
    std::size_t peak = 0;
    bool ok = false;
    for (std::size_t k = 1; k + 1 < dg.size(); ++k) {
        if (!peak && dg[k] > dg[k - 1] && dg[k] > dg[k + 1]) peak = k;
        if (peak && k > peak && dg[k] < dg[k - 1] && dg[k] < dg[k + 1]) ok = true;
    }
    return {ok, "DG(photon 0, phonon 0) at nbar 0,0.1,0.5,2.5,12.5: " + join(dg, 5)};
}

Outcome performance() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const CovarianceMatrix v = stable_covariance(reference(-2.5, 15.0));
    const CorrelationMap map = correlation_map(v, Species::photon, Species::phonon, Measure::discord);
    const double point_s = std::chrono::duration<double>(clock::now() - t0).count();

    std::vector<double> dets(50), drives(50);
    for (int k = 0; k < 50; ++k) {
        dets[k] = -3.0 + 6.0 * k / 49.0;
        drives[k] = 1000.0 * k / 49.0;
    }
    const auto t1 = clock::now();
    const auto cells = stability_map(reference(0.0, 0.0), dets, drives, worker_count());
    const double map_s = std::chrono::duration<double>(clock::now() - t1).count();
    int stable = 0;
    for (const auto& c : cells) stable += c.stable;
    const bool ok = map.errors.empty() && point_s <= 60.0 && map_s <= 600.0;
    return {ok, "N=101 point with 101x101 discord map " + fmt(point_s, 3) + " s (limit 60); 50x50 N=101 stability map " +
                    fmt(map_s, 4) + " s on " + std::to_string(worker_count()) + " thread(s) (limit 600), " +
                    std::to_string(stable) + "/2500 stable"};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"thermal_conversions", thermal_conversions},
        {"oracle_equivalence", oracle_equivalence},
        {"physicality", physicality},
        {"decoupling_null", decoupling},
        {"entanglement_range_vs_detuning", entanglement_range_vs_detuning},
        {"no_same_species_entanglement", same_species},
        {"onsite_entanglement_vs_drive", onsite_vs_drive},
        {"edge_entanglement_vs_heating", edge_vs_heating},
        {"long_range_discord", long_range},
        {"discord_vs_heating", discord_heating},
        {"performance", performance},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--list") {
            for (const auto& c : criteria()) std::printf("%s\n", c.name);
            return 0;
        }
        if (arg == "--criterion" && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--list] [--criterion NAME]\n", argv[0]);
            return 2;
        }
    }
    int failures = 0, ran = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && only != c.name) continue;
        ++ran;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
