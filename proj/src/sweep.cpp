#include "omcorr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "omcorr/errors.hpp"
#include "omcorr/parallel.hpp"

namespace omcorr {

PointSolution solve_point(const LatticeParams& p) {
    PointSolution s;
    s.params = p;
    s.stability.spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
    try {
        s.mean_fields = solve_mean_fields(p);
        const DriftMatrix a = assemble_drift(p, s.mean_fields);
        s.stability = classify_stability(a);
        if (!s.stability.stable) {
            s.error = s.stability.marginal ? "marginally stable" : "unstable";
            return s;
        }
        const LyapunovSolution sol = solve_lyapunov(a.matrix, assemble_diffusion(p).dense());
        s.covariance = CovarianceMatrix{sol.v, p.n_sites};
        s.lyapunov_residual = sol.relative_residual;
    } catch (const std::exception& e) {
        s.error = e.what();
    }
    return s;
}

std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::detuning: return "detuning";
        case SweepAxis::drive: return "drive";
        case SweepAxis::thermal: return "thermal";
    }
    return "detuning";
}

SweepAxis sweep_axis_from_string(std::string_view s) {
    if (s == "detuning") return SweepAxis::detuning;
    if (s == "drive") return SweepAxis::drive;
    if (s == "thermal") return SweepAxis::thermal;
    throw InvalidParameter("unknown sweep axis '" + std::string(s) + "' (expected detuning|drive|thermal)");
}

LatticeParams with_axis_value(const LatticeParams& base, SweepAxis axis, double value) {
    LatticeParams p = base;
    switch (axis) {
        case SweepAxis::detuning: p.detuning = value; break;
        case SweepAxis::drive:
            if (value < 0.0) throw InvalidParameter("drive magnitude must be >= 0");
            p.drive = drive_from_polar(value, base.drive_phase());
            break;
        case SweepAxis::thermal: p.nbar_m = value; break;
    }
    return p;
}

std::vector<ModePair> all_pairs(int n_sites, Species a, Species b) {
    std::vector<ModePair> pairs;
    for (int i = 0; i < n_sites; ++i) {
        for (int j = 0; j < n_sites; ++j) {
            if (a == b && i == j) continue;
            pairs.push_back({{SiteIndex::from_offset(i, n_sites), a}, {SiteIndex::from_offset(j, n_sites), b}});
        }
    }
    return pairs;
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    if (spec.values.empty()) throw InvalidParameter("sweep: no axis values");
    for (double v : spec.values) {
        if (!std::isfinite(v)) throw InvalidParameter("sweep: axis values must be finite");
        validate(with_axis_value(spec.base, spec.axis, v));
    }
    if (spec.measures.empty()) throw InvalidParameter("sweep: no measures");
    for (const auto& pair : spec.pairs) {
        if (pair.a == pair.b) throw InvalidParameter("sweep: pair with identical modes");
        (void)pair.a.site.offset(spec.base.n_sites);
        (void)pair.b.site.offset(spec.base.n_sites);
    }
}

std::vector<ResultRecord> run_sweep(const SweepSpec& spec, int threads, const Progress& progress) {
    validate(spec);
    const std::size_t per_point = spec.pairs.size() * spec.measures.size();
    std::vector<ResultRecord> records(spec.values.size() * per_point);
    detail::ProgressTicker ticker(progress, spec.values.size());

    detail::parallel_for(spec.values.size(), threads, [&](std::size_t ai) {
        const double x = spec.values[ai];
        const PointSolution sol = solve_point(with_axis_value(spec.base, spec.axis, x));
        for (std::size_t pi = 0; pi < spec.pairs.size(); ++pi) {
            std::optional<ReducedCM> reduced;
            std::string pair_error = sol.error;
            if (sol.covariance) {
                try {
                    reduced = reduce(*sol.covariance, spec.pairs[pi].a, spec.pairs[pi].b);
                } catch (const std::exception& e) {
                    pair_error = e.what();
                }
            }
            for (std::size_t mi = 0; mi < spec.measures.size(); ++mi) {
                ResultRecord& r = records[ai * per_point + pi * spec.measures.size() + mi];
                r.axis = spec.axis;
                r.axis_value = x;
                r.mode_a = spec.pairs[pi].a;
                r.mode_b = spec.pairs[pi].b;
                r.measure = spec.measures[mi];
                r.stable = sol.stability.stable;
                r.branch_note = sol.mean_fields.branch_note;
                r.spectral_abscissa = sol.stability.spectral_abscissa;
                r.error = pair_error;
                if (!reduced) continue;
                try {
                    r.value = r.measure == Measure::negativity ? log_negativity(*reduced)
                                                               : symmetrized_discord(*reduced, spec.log_base);
                } catch (const std::exception& e) {
                    r.error = e.what();
                }
            }
        }
        ticker.tick();
    });
    return records;
}

// --- CSV -------------------------------------------------------------------

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string s = "\"";
    for (char ch : field) {
        if (ch == '"') s += '"';
        s += ch;
    }
    return s + '"';
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields(1);
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (ch == '"') {
                in_quotes = false;
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
    }
    return x;
}

int parse_int(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    const double x = parse_double(s, path, line);
    if (x != std::floor(x)) throw IoError(path.string() + ":" + std::to_string(line) + ": bad integer '" + s + "'");
    return static_cast<int>(x);
}

}  // namespace

void write_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path) {
    auto out = open_for_writing(path);
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << to_string(r.axis) << ',' << format_double(r.axis_value) << ',' << r.mode_a.site.j << ','
            << to_string(r.mode_a.species) << ',' << r.mode_b.site.j << ',' << to_string(r.mode_b.species) << ','
            << to_string(r.measure) << ',' << (r.value ? format_double(*r.value) : std::string()) << ','
            << (r.stable ? 1 : 0) << ',' << to_string(r.branch_note) << ',' << format_double(r.spectral_abscissa)
            << ',' << quoted(r.error) << '\n';
    }
    finish(out, path);
}

std::vector<ResultRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != kRecordHeader) {
        throw IoError(path.string() + ": missing or unexpected header");
    }
    std::vector<ResultRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        // A quoted field may span lines.
        std::string more;
        while (std::count(line.begin(), line.end(), '"') % 2 != 0 && std::getline(in, more)) {
            ++lineno;
            line += '\n' + more;
        }
        const auto f = split_row(line);
        if (f.size() != 12) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 12 fields");
        try {
            ResultRecord r;
            r.axis = sweep_axis_from_string(f[0]);
            r.axis_value = parse_double(f[1], path, lineno);
            r.mode_a = {{parse_int(f[2], path, lineno)}, species_from_string(f[3])};
            r.mode_b = {{parse_int(f[4], path, lineno)}, species_from_string(f[5])};
            r.measure = measure_from_string(f[6]);
            if (!f[7].empty()) r.value = parse_double(f[7], path, lineno);
            r.stable = parse_int(f[8], path, lineno) != 0;
            r.branch_note = branch_note_from_string(f[9]);
            r.spectral_abscissa = parse_double(f[10], path, lineno);
            r.error = f[11];
            records.push_back(std::move(r));
        } catch (const InvalidParameter& e) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

void write_stability_csv(const std::vector<StabilityCell>& cells, const std::filesystem::path& path) {
    auto out = open_for_writing(path);
    out << kStabilityHeader << '\n';
    for (const auto& c : cells) {
        out << format_double(c.detuning) << ',' << format_double(c.drive) << ','
            << format_double(c.spectral_abscissa) << ',' << (c.stable ? 1 : 0) << '\n';
    }
    finish(out, path);
}

void write_correlation_csv(const CorrelationMap& map, const std::filesystem::path& path) {
    auto out = open_for_writing(path);
    out << kCorrelationHeader << '\n';
    const int n = map.n_sites;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out << SiteIndex::from_offset(i, n).j << ',' << SiteIndex::from_offset(j, n).j << ','
                << to_string(map.species_a) << ',' << to_string(map.species_b) << ',' << to_string(map.measure)
                << ',' << format_double(map.at(i, j)) << '\n';
        }
    }
    finish(out, path);
}

void write_covariance_csv(const CovarianceMatrix& v, const std::filesystem::path& path) {
    auto out = open_for_writing(path);
    const int n = v.n_sites;
    out << "# steady-state covariance matrix, " << v.dim() << "x" << v.dim()
        << ", row-major; per site j ordering X_j,Y_j,x_j,y_j (optical X,Y; mechanical x,y); vacuum variance 0.5\n";
    for (int s = 0; s < n; ++s) {
        const int j = SiteIndex::from_offset(s, n).j;
        for (const char* q : {"X", "Y", "x", "y"}) out << (s == 0 && q[0] == 'X' ? "" : ",") << q << '_' << j;
    }
    out << '\n';
    for (int r = 0; r < v.dim(); ++r) {
        for (int c = 0; c < v.dim(); ++c) out << (c ? "," : "") << format_double(v.matrix(r, c));
        out << '\n';
    }
    finish(out, path);
}

}  // namespace omcorr
