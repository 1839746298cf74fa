// omcorr: command-line front end for the optomechanical-array correlation solver.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omcorr/config.hpp"
#include "omcorr/errors.hpp"
#include "omcorr/sweep.hpp"

using namespace omcorr;

namespace {

void note(const std::string& msg) { std::cerr << "omcorr: " << msg << '\n'; }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Prints "label: done/total" on stderr roughly every 5% of the work.
Progress stderr_progress(std::string label) {
    return [label, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
        const std::size_t step = std::max<std::size_t>(1, total / 20);
        if (done == total || done >= last + step) {
            last = done;
            std::cerr << "omcorr: " << label << ' ' << done << '/' << total << '\n';
        }
    };
}

// Flags shared by every lattice-based subcommand. Options left unset keep the
// config file's values.
struct Overrides {
    std::string config;
    std::optional<int> n_sites;
    std::optional<double> detuning, kappa, gamma, omega_m, g0, hop_mechanical, drive, drive_phase, nbar_m;
    std::optional<std::string> boundary, log_base;
    std::optional<int> threads;
    bool allow_even_sites = false;

    void attach(CLI::App& app) {
        app.add_option("-c,--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        app.add_option("--n-sites", n_sites, "number of lattice sites (odd)");
        app.add_option("--detuning", detuning, "laser detuning Delta/J");
        app.add_option("--kappa", kappa, "cavity decay rate kappa/J");
        app.add_option("--gamma", gamma, "mechanical damping gamma/J");
        app.add_option("--omega-m", omega_m, "mechanical frequency omega_m/J");
        app.add_option("--g0", g0, "single-photon coupling g0/J");
        app.add_option("--hop-mechanical", hop_mechanical, "phonon hopping K/J");
        app.add_option("--drive", drive, "drive magnitude |eta|/J");
        app.add_option("--drive-phase", drive_phase, "drive phase in radians");
        app.add_option("--nbar-m", nbar_m, "thermal phonon occupancy");
        app.add_option("--boundary", boundary, "open or periodic");
        app.add_flag("--allow-even-sites", allow_even_sites, "accept an even number of sites");
        app.add_option("--log-base", log_base, "discord logarithm base: 10, 2 or e");
        app.add_option("-j,--threads", threads, "worker threads");
    }

    RunConfig load() const {
        RunConfig cfg = config.empty() ? parse_config("{}") : load_config(config);
        LatticeParams& p = cfg.params;
        if (n_sites) p.n_sites = *n_sites;
        if (detuning) p.detuning = *detuning;
        if (kappa) p.kappa = *kappa;
        if (gamma) p.gamma = *gamma;
        if (omega_m) p.omega_m = *omega_m;
        if (g0) p.g0 = *g0;
        if (hop_mechanical) p.hop_mechanical = *hop_mechanical;
        if (drive || drive_phase) {
            p.drive = drive_from_polar(drive.value_or(p.drive_magnitude()), drive_phase.value_or(p.drive_phase()));
        }
        if (nbar_m) p.nbar_m = *nbar_m;
        if (boundary) p.boundary = boundary_from_string(*boundary);
        if (allow_even_sites) p.allow_even_sites = true;
        if (log_base) cfg.log_base = log_base_from_string(*log_base);
        if (threads) cfg.threads = *threads;
        if (cfg.threads < 1) throw InvalidParameter("threads must be >= 1");
        validate(p);
        return cfg;
    }
};

std::string complex_text(std::complex<double> z) {
    return format_double(z.real()) + " " + format_double(z.imag());
}

int run_solve(const Overrides& o, const std::string& dump_cov) {
    const RunConfig cfg = o.load();
    Stopwatch clock;
    note("solving N=" + std::to_string(cfg.params.n_sites) + " point");
    const PointSolution s = solve_point(cfg.params);
    std::printf("alpha %s\n", complex_text(s.mean_fields.alpha).c_str());
    std::printf("beta %s\n", complex_text(s.mean_fields.beta).c_str());
    std::printf("photon_number %s\n", format_double(s.mean_fields.photon_number).c_str());
    std::printf("branch_note %s\n", std::string(to_string(s.mean_fields.branch_note)).c_str());
    std::printf("spectral_abscissa %s\n", format_double(s.stability.spectral_abscissa).c_str());
    std::printf("stable %d\n", s.stability.stable ? 1 : 0);
    if (s.covariance) {
        std::printf("lyapunov_residual %s\n", format_double(s.lyapunov_residual).c_str());
        std::printf("min_symplectic_eigenvalue %s\n",
                    format_double(physicality_check(s.covariance->matrix).min_symplectic_eigenvalue).c_str());
    }
    if (!dump_cov.empty()) {
        if (!s.covariance) {
            note("no steady state (" + s.error + "); covariance not written");
            return 3;
        }
        write_covariance_csv(*s.covariance, dump_cov);
        note("covariance written to " + dump_cov);
    }
    note("done in " + format_double(clock.seconds()) + " s");
    return 0;
}

int run_stability_map(const Overrides& o, const std::string& det_grid, const std::string& drive_grid,
                      const std::string& out) {
    RunConfig cfg = o.load();
    if (!det_grid.empty()) cfg.detuning_grid = parse_grid(det_grid);
    if (!drive_grid.empty()) cfg.drive_grid = parse_grid(drive_grid);
    if (cfg.detuning_grid.empty() || cfg.drive_grid.empty()) {
        throw InvalidParameter("stability-map needs a detuning grid and a drive grid");
    }
    Stopwatch clock;
    const auto cells = stability_map(cfg.params, cfg.detuning_grid, cfg.drive_grid, cfg.threads,
                                     stderr_progress("stability cells"));
    write_stability_csv(cells, out);
    std::size_t failed = 0;
    for (const auto& c : cells) failed += c.error.empty() ? 0 : 1;
    if (failed) note(std::to_string(failed) + " cells could not be evaluated (written as nan)");
    note("wrote " + out + " in " + format_double(clock.seconds()) + " s");
    return 0;
}

int run_corr_map(const Overrides& o, const std::optional<std::string>& sa, const std::optional<std::string>& sb,
                 const std::optional<std::string>& measure, const std::string& out) {
    RunConfig cfg = o.load();
    if (sa) cfg.species_a = species_from_string(*sa);
    if (sb) cfg.species_b = species_from_string(*sb);
    if (measure) cfg.measure = measure_from_string(*measure);
    Stopwatch clock;
    note("solving N=" + std::to_string(cfg.params.n_sites) + " point");
    const PointSolution s = solve_point(cfg.params);
    if (!s.covariance) {
        note("no steady state at this point: " + s.error + " (spectral abscissa " +
             format_double(s.stability.spectral_abscissa) + ")");
        return 3;
    }
    note("computing " + std::string(to_string(cfg.measure)) + " map");
    const CorrelationMap map = correlation_map(*s.covariance, cfg.species_a, cfg.species_b, cfg.measure,
                                               cfg.log_base, cfg.threads);
    write_correlation_csv(map, out);
    for (const auto& e : map.errors) {
        note("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + "): " + e.message);
    }
    note("wrote " + out + " in " + format_double(clock.seconds()) + " s");
    return map.errors.empty() ? 0 : 4;
}

int run_sweep_cmd(const Overrides& o, const std::optional<std::string>& axis, const std::string& values,
                  const std::vector<std::string>& pairs, const std::string& all, const std::string& measures,
                  const std::string& out) {
    RunConfig cfg = o.load();
    if (!cfg.sweep && !axis) throw InvalidParameter("sweep needs an axis (config 'sweep' section or --axis)");
    if (!cfg.sweep) cfg.sweep = SweepSpec{};
    if (axis) cfg.sweep->axis = sweep_axis_from_string(*axis);
    if (!values.empty()) cfg.sweep->values = parse_grid(values);
    if (!pairs.empty() || !all.empty()) {
        cfg.sweep->pairs.clear();
        cfg.sweep_all_pairs.reset();
    }
    for (const auto& pr : pairs) {
        const auto comma = pr.find(',');
        if (comma == std::string::npos) throw InvalidParameter("--pair '" + pr + "' must look like photon:0,phonon:0");
        cfg.sweep->pairs.push_back({parse_mode(pr.substr(0, comma)), parse_mode(pr.substr(comma + 1))});
    }
    if (!all.empty()) {
        const auto comma = all.find(',');
        if (comma == std::string::npos) throw InvalidParameter("--all-pairs '" + all + "' must look like photon,phonon");
        cfg.sweep_all_pairs = std::pair{species_from_string(all.substr(0, comma)),
                                        species_from_string(all.substr(comma + 1))};
    }
    if (!measures.empty()) {
        cfg.sweep->measures.clear();
        std::stringstream ss(measures);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.sweep->measures.push_back(measure_from_string(item));
    }
    const SweepSpec spec = cfg.sweep_spec();
    if (spec.values.empty()) throw InvalidParameter("sweep has no axis values");
    if (spec.pairs.empty()) throw InvalidParameter("sweep has no mode pairs");
    Stopwatch clock;
    const auto records = run_sweep(spec, cfg.threads, stderr_progress("sweep points"));
    write_csv(records, out);
    std::size_t unstable = 0, failed = 0;
    for (const auto& r : records) {
        unstable += r.stable ? 0 : 1;
        failed += (r.stable && !r.value) ? 1 : 0;
    }
    if (unstable) note(std::to_string(unstable) + " records at unstable points (value omitted)");
    if (failed) note(std::to_string(failed) + " records failed at stable points; see the error column");
    note("wrote " + std::to_string(records.size()) + " records to " + out + " in " +
         format_double(clock.seconds()) + " s");
    return 0;
}

int run_thermal(double frequency, const std::optional<double>& temperature, const std::optional<double>& nbar) {
    if (!(frequency > 0.0) || !std::isfinite(frequency)) throw InvalidParameter("--frequency must be > 0 (Hz)");
    const double w = 2.0 * std::numbers::pi * frequency;
    if (!temperature && !nbar) throw InvalidParameter("thermal-convert needs --temperature or --nbar");
    if (temperature) {
        std::printf("nbar_m %s\n", format_double(thermal_occupation(w, *temperature)).c_str());
    } else {
        std::printf("temperature_K %s\n", format_double(temperature_from_occupation(w, *nbar)).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state quantum correlations in optomechanical arrays"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "omcorr 0.1.0");

    Overrides solve_o, smap_o, cmap_o, sweep_o;

    auto* solve = app.add_subcommand("solve", "mean fields, stability and steady state at one point");
    solve_o.attach(*solve);
    std::string dump_cov;
    solve->add_option("--dump-cov", dump_cov, "write the full covariance matrix to this CSV");

    auto* smap = app.add_subcommand("stability-map", "stability over a detuning x drive grid");
    smap_o.attach(*smap);
    std::string det_grid, drive_grid, smap_out;
    smap->add_option("--detuning-grid", det_grid, "start:stop:count or comma list");
    smap->add_option("--drive-grid", drive_grid, "start:stop:count or comma list");
    smap->add_option("-o,--output", smap_out, "output CSV")->required();

    auto* cmap = app.add_subcommand("corr-map", "site x site correlation map at one point");
    cmap_o.attach(*cmap);
    std::optional<std::string> species_a, species_b, measure;
    std::string cmap_out;
    cmap->add_option("--species-a", species_a, "photon or phonon (rows)");
    cmap->add_option("--species-b", species_b, "photon or phonon (columns)");
    cmap->add_option("--measure", measure, "negativity or discord");
    cmap->add_option("-o,--output", cmap_out, "output CSV")->required();

    auto* sweep = app.add_subcommand("sweep", "correlations of chosen pairs along one parameter axis");
    sweep_o.attach(*sweep);
    std::optional<std::string> axis;
    std::string values, all_pairs_text, measures, sweep_out;
    std::vector<std::string> pairs;
    sweep->add_option("--axis", axis, "detuning, drive or thermal");
    sweep->add_option("--values", values, "start:stop:count or comma list");
    sweep->add_option("--pair", pairs, "mode pair such as photon:0,phonon:0 (repeatable)");
    sweep->add_option("--all-pairs", all_pairs_text, "every site pair for two species, e.g. photon,phonon");
    sweep->add_option("--measures", measures, "comma list of negativity, discord");
    sweep->add_option("-o,--output", sweep_out, "output CSV")->required();

    auto* thermal = app.add_subcommand("thermal-convert", "convert between bath temperature and occupancy");
    double frequency = 0.0;
    std::optional<double> temperature, nbar;
    thermal->add_option("--frequency", frequency, "mechanical frequency in Hz (omega / 2 pi)")->required();
    auto* t_opt = thermal->add_option("--temperature", temperature, "bath temperature in kelvin");
    auto* n_opt = thermal->add_option("--nbar", nbar, "mean thermal occupancy");
    t_opt->excludes(n_opt);
    n_opt->excludes(t_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(solve_o, dump_cov);
        if (*smap) return run_stability_map(smap_o, det_grid, drive_grid, smap_out);
        if (*cmap) return run_corr_map(cmap_o, species_a, species_b, measure, cmap_out);
        if (*sweep) return run_sweep_cmd(sweep_o, axis, values, pairs, all_pairs_text, measures, sweep_out);
        if (*thermal) return run_thermal(frequency, temperature, nbar);
    } catch (const InvalidParameter& e) {
        note(std::string("invalid input: ") + e.what());
        return 2;
    } catch (const IoError& e) {
        note(std::string("i/o error: ") + e.what());
        return 2;
    } catch (const std::exception& e) {
        note(std::string("error: ") + e.what());
        return 1;
    }
    return 0;
}
