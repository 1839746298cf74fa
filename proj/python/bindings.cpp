#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "omcorr/config.hpp"
#include "omcorr/errors.hpp"
#include "omcorr/sweep.hpp"

namespace py = pybind11;
using namespace omcorr;

namespace {

ModeRef mode_arg(const py::handle& h) {
    if (py::isinstance<py::str>(h)) return parse_mode(h.cast<std::string>());
    auto t = h.cast<py::tuple>();
    if (t.size() != 2) throw InvalidParameter("mode must be 'photon:0' or (site, species)");
    return {{t[0].cast<int>()}, species_from_string(t[1].cast<std::string>())};
}

std::string mode_text(const ModeRef& m) { return std::string(to_string(m.species)) + ":" + std::to_string(m.site.j); }

py::dict record_dict(const ResultRecord& r) {
    py::dict d;
    d["axis"] = std::string(to_string(r.axis));
    d["axis_value"] = r.axis_value;
    d["mode_a"] = mode_text(r.mode_a);
    d["mode_b"] = mode_text(r.mode_b);
    d["measure"] = std::string(to_string(r.measure));
    d["value"] = r.value ? py::cast(*r.value) : py::none();
    d["stable"] = r.stable;
    d["branch_note"] = std::string(to_string(r.branch_note));
    d["spectral_abscissa"] = r.spectral_abscissa;
    d["error"] = r.error;
    return d;
}

}  // namespace

PYBIND11_MODULE(_omcorr, m) {
    m.doc() = "Steady-state quantum correlations in 1-D optomechanical arrays";

    static py::exception<NoSteadyState> no_steady(m, "NoSteadyState", PyExc_RuntimeError);
    static py::exception<SolverFailure> solver_failure(m, "SolverFailure", PyExc_RuntimeError);
    static py::exception<PhysicalityError> physicality(m, "PhysicalityError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const NoSteadyState& e) {
            py::set_error(no_steady, e.what());
        } catch (const PhysicalityError& e) {
            py::set_error(physicality, e.what());
        } catch (const SolverFailure& e) {
            py::set_error(solver_failure, e.what());
        } catch (const IoError& e) {
            py::set_error(PyExc_OSError, e.what());
        }
    });

    py::class_<LatticeParams>(m, "LatticeParams")
        .def(py::init([](int n_sites, double detuning, double kappa, double gamma, double omega_m, double g0,
                         double hop_mechanical, std::complex<double> drive, double nbar_m, const std::string& boundary,
                         bool allow_even_sites) {
                 LatticeParams p;
                 p.n_sites = n_sites;
                 p.detuning = detuning;
                 p.kappa = kappa;
                 p.gamma = gamma;
                 p.omega_m = omega_m;
                 p.g0 = g0;
                 p.hop_mechanical = hop_mechanical;
                 p.drive = drive;
                 p.nbar_m = nbar_m;
                 p.boundary = boundary_from_string(boundary);
                 p.allow_even_sites = allow_even_sites;
                 validate(p);
                 return p;
             }),
             py::kw_only(), py::arg("n_sites") = 1, py::arg("detuning") = 0.0, py::arg("kappa") = 0.1,
             py::arg("gamma") = 0.002, py::arg("omega_m") = 0.1, py::arg("g0") = 0.0,
             py::arg("hop_mechanical") = 0.05, py::arg("drive") = std::complex<double>{0.0, 0.0},
             py::arg("nbar_m") = 0.0, py::arg("boundary") = "open", py::arg("allow_even_sites") = false)
        .def_readwrite("n_sites", &LatticeParams::n_sites)
        .def_readwrite("detuning", &LatticeParams::detuning)
        .def_readwrite("kappa", &LatticeParams::kappa)
        .def_readwrite("gamma", &LatticeParams::gamma)
        .def_readwrite("omega_m", &LatticeParams::omega_m)
        .def_readwrite("g0", &LatticeParams::g0)
        .def_readonly("hop_optical", &LatticeParams::hop_optical)
        .def_readwrite("hop_mechanical", &LatticeParams::hop_mechanical)
        .def_readwrite("drive", &LatticeParams::drive)
        .def_readwrite("nbar_m", &LatticeParams::nbar_m)
        .def_property(
            "boundary", [](const LatticeParams& p) { return std::string(to_string(p.boundary)); },
            [](LatticeParams& p, const std::string& s) { p.boundary = boundary_from_string(s); })
        .def_readwrite("allow_even_sites", &LatticeParams::allow_even_sites)
        .def("validate", [](const LatticeParams& p) { validate(p); })
        .def("__repr__", [](const LatticeParams& p) {
            return "LatticeParams(n_sites=" + std::to_string(p.n_sites) + ", detuning=" + format_double(p.detuning) +
                   ", drive=" + format_double(std::abs(p.drive)) + ", g0=" + format_double(p.g0) +
                   ", nbar_m=" + format_double(p.nbar_m) + ")";
        });

    py::class_<MeanFields>(m, "MeanFields")
        .def_readonly("alpha", &MeanFields::alpha)
        .def_readonly("beta", &MeanFields::beta)
        .def_readonly("photon_number", &MeanFields::photon_number)
        .def_readonly("converged", &MeanFields::converged)
        .def_property_readonly("branch_note",
                               [](const MeanFields& f) { return std::string(to_string(f.branch_note)); });

    m.def("solve_mean_fields", &solve_mean_fields, py::arg("params"));
    m.def("photon_number_roots", &photon_number_roots, py::arg("params"),
          "All positive self-consistent photon numbers, ascending.");
    m.def("thermal_occupation", &thermal_occupation, py::arg("angular_frequency"), py::arg("temperature"));
    m.def("temperature_from_occupation", &temperature_from_occupation, py::arg("angular_frequency"),
          py::arg("occupancy"));

    m.def(
        "drift_matrix",
        [](const LatticeParams& p) { return assemble_drift(p, solve_mean_fields(p)).matrix; }, py::arg("params"));
    m.def(
        "diffusion_matrix", [](const LatticeParams& p) { return assemble_diffusion(p).dense(); }, py::arg("params"));
    m.def("spectral_abscissa", &spectral_abscissa, py::arg("a"));
    m.def(
        "stability_map",
        [](const LatticeParams& base, const std::vector<double>& detunings, const std::vector<double>& drives,
           int threads) {
            const auto cells = stability_map(base, detunings, drives, threads);
            Eigen::MatrixXd abscissa(detunings.size(), drives.size());
            Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> stable(detunings.size(), drives.size());
            for (std::size_t k = 0; k < cells.size(); ++k) {
                abscissa(k / drives.size(), k % drives.size()) = cells[k].spectral_abscissa;
                stable(k / drives.size(), k % drives.size()) = cells[k].stable;
            }
            return py::make_tuple(abscissa, stable);
        },
        py::arg("params"), py::arg("detunings"), py::arg("drives"), py::arg("threads") = 1,
        "Returns (spectral_abscissa, stable) arrays indexed [detuning, drive].");

    m.def(
        "solve_lyapunov", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) { return solve_lyapunov(a, d).v; },
        py::arg("a"), py::arg("d"), "Solves A V + V A^T = -D for stable A.");
    m.def(
        "steady_state",
        [](const LatticeParams& p) {
            const PointSolution s = solve_point(p);
            if (!s.covariance) {
                throw NoSteadyState("no steady state: " + s.error + " (spectral abscissa " +
                                    format_double(s.stability.spectral_abscissa) + ")");
            }
            return s.covariance->matrix;
        },
        py::arg("params"), "Steady-state covariance matrix (vacuum variance 1/2).");
    m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("v"));

    m.def(
        "log_negativity", [](const Eigen::Matrix4d& v) { return log_negativity(ReducedCM(v)); }, py::arg("v"),
        "Logarithmic negativity of a two-mode covariance matrix.");
    m.def(
        "gaussian_discord",
        [](const Eigen::Matrix4d& v, const std::string& direction, const std::string& log_base) {
            const ReducedCM r(v);
            const LogBase base = log_base_from_string(log_base);
            if (direction == "sym") return symmetrized_discord(r, base);
            if (direction == "a") return gaussian_discord_directional(r, DiscordDirection::a, base);
            if (direction == "b") return gaussian_discord_directional(r, DiscordDirection::b, base);
            throw InvalidParameter("direction must be a, b or sym");
        },
        py::arg("v"), py::arg("direction") = "sym", py::arg("log_base") = "10");
    m.def(
        "correlation_map",
        [](const LatticeParams& p, const std::string& species_a, const std::string& species_b,
           const std::string& measure, const std::string& log_base, int threads) {
            const PointSolution s = solve_point(p);
            if (!s.covariance) throw NoSteadyState("no steady state: " + s.error);
            const CorrelationMap map =
                correlation_map(*s.covariance, species_from_string(species_a), species_from_string(species_b),
                                measure_from_string(measure), log_base_from_string(log_base), threads);
            if (!map.errors.empty()) throw PhysicalityError(map.errors.front().message);
            return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                       map.values.data(), map.n_sites, map.n_sites)
                .eval();
        },
        py::arg("params"), py::arg("species_a") = "photon", py::arg("species_b") = "phonon",
        py::arg("measure") = "negativity", py::arg("log_base") = "10", py::arg("threads") = 1,
        "N x N map indexed by site offset; same-species diagonal entries are NaN.");

    m.def(
        "run_sweep",
        [](const LatticeParams& base, const std::string& axis, const std::vector<double>& values,
           const std::vector<py::object>& pairs, const std::vector<std::string>& measures, const std::string& log_base,
           int threads, const std::string& output) {
            SweepSpec spec;
            spec.base = base;
            spec.axis = sweep_axis_from_string(axis);
            spec.values = values;
            for (const auto& pr : pairs) {
                auto t = pr.cast<py::tuple>();
                if (t.size() != 2) throw InvalidParameter("each pair must be (mode_a, mode_b)");
                spec.pairs.push_back({mode_arg(t[0]), mode_arg(t[1])});
            }
            spec.measures.clear();
            for (const auto& s : measures) spec.measures.push_back(measure_from_string(s));
            spec.log_base = log_base_from_string(log_base);
            std::vector<ResultRecord> records;
            {
                py::gil_scoped_release release;
                records = run_sweep(spec, threads);
            }
            if (!output.empty()) write_csv(records, output);
            py::list out;
            for (const auto& r : records) out.append(record_dict(r));
            return out;
        },
        py::arg("params"), py::arg("axis"), py::arg("values"), py::arg("pairs"),
        py::arg("measures") = std::vector<std::string>{"negativity"}, py::arg("log_base") = "10",
        py::arg("threads") = 1, py::arg("output") = "",
        "Sweep one axis; pairs are (mode, mode) with modes like 'photon:0'. Optionally writes the CSV.");
    m.def(
        "read_csv",
        [](const std::filesystem::path& path) {
            py::list out;
            for (const auto& r : read_csv(path)) out.append(record_dict(r));
            return out;
        },
        py::arg("path"));
}
