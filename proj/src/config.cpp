#include "omcorr/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "omcorr/errors.hpp"

namespace omcorr {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) throw InvalidParameter("config: unknown key '" + key + "' in " + where);
    }
}

std::vector<double> grid_of(const json& j) {
    if (j.is_string()) return parse_grid(j.get<std::string>());
    return j.get<std::vector<double>>();
}

std::complex<double> drive_of(const json& j, double phase) {
    if (j.is_number()) return drive_from_polar(j.get<double>(), phase);
    if (j.is_object()) {
        reject_unknown(j, {"magnitude", "phase"}, "drive");
        return drive_from_polar(j.at("magnitude").get<double>(), j.value("phase", phase));
    }
    throw InvalidParameter("config: drive must be a number or {\"magnitude\", \"phase\"}");
}

ModeRef mode_of(const json& j) {
    if (j.is_string()) return parse_mode(j.get<std::string>());
    reject_unknown(j, {"site", "species"}, "mode");
    return {{j.at("site").get<int>()}, species_from_string(j.at("species").get<std::string>())};
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw InvalidParameter("grid: bad number '" + s + "'");
        return x;
    };
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        const double start = number(text.substr(0, c1));
        const double stop = number(text.substr(c1 + 1, c2 - c1 - 1));
        const double count = number(text.substr(c2 + 1));
        if (count < 1 || count != std::floor(count)) throw InvalidParameter("grid: count must be a positive integer");
        const int n = static_cast<int>(count);
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(number(item));
    }
    if (out.empty()) throw InvalidParameter("grid: no values in '" + text + "'");
    return out;
}

ModeRef parse_mode(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidParameter("mode '" + text + "' must look like photon:0");
    std::size_t used = 0;
    int site = 0;
    try {
        site = std::stoi(text.substr(colon + 1), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || colon + 1 + used != text.size()) throw InvalidParameter("mode '" + text + "': bad site");
    return {{site}, species_from_string(text.substr(0, colon))};
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidParameter(std::string("config: ") + e.what());
    }
    if (!root.is_object()) throw InvalidParameter("config: top level must be an object");
    reject_unknown(root,
                   {"n_sites", "detuning", "kappa", "gamma", "omega_m", "g0", "hop_optical", "hop_mechanical",
                    "drive", "drive_phase", "nbar_m", "boundary", "allow_even_sites", "units", "log_base", "threads",
                    "stability_map", "corr_map", "sweep"},
                   "top level");

    RunConfig cfg;
    try {
        LatticeParams& p = cfg.params;
        p.n_sites = root.value("n_sites", p.n_sites);
        p.detuning = root.value("detuning", p.detuning);
        p.kappa = root.value("kappa", p.kappa);
        p.gamma = root.value("gamma", p.gamma);
        p.omega_m = root.value("omega_m", p.omega_m);
        p.g0 = root.value("g0", p.g0);
        p.hop_optical = root.value("hop_optical", p.hop_optical);
        p.hop_mechanical = root.value("hop_mechanical", p.hop_mechanical);
        const double phase = root.value("drive_phase", 0.0);
        if (root.contains("drive")) p.drive = drive_of(root["drive"], phase);
        p.nbar_m = root.value("nbar_m", p.nbar_m);
        if (root.contains("boundary")) p.boundary = boundary_from_string(root["boundary"].get<std::string>());
        p.allow_even_sites = root.value("allow_even_sites", p.allow_even_sites);
        const std::string units = root.value("units", std::string("normalized"));
        if (units == "absolute") {
            p = normalized_from_absolute(p);
        } else if (units != "normalized") {
            throw InvalidParameter("config: units must be normalized|absolute");
        }

        if (root.contains("log_base")) {
            const auto& b = root["log_base"];
            cfg.log_base = log_base_from_string(b.is_number() ? std::to_string(b.get<int>()) : b.get<std::string>());
        }
        cfg.threads = root.value("threads", cfg.threads);

        if (root.contains("stability_map")) {
            const auto& s = root["stability_map"];
            reject_unknown(s, {"detuning_grid", "drive_grid"}, "stability_map");
            if (s.contains("detuning_grid")) cfg.detuning_grid = grid_of(s["detuning_grid"]);
            if (s.contains("drive_grid")) cfg.drive_grid = grid_of(s["drive_grid"]);
        }
        if (root.contains("corr_map")) {
            const auto& c = root["corr_map"];
            reject_unknown(c, {"species_a", "species_b", "measure"}, "corr_map");
            if (c.contains("species_a")) cfg.species_a = species_from_string(c["species_a"].get<std::string>());
            if (c.contains("species_b")) cfg.species_b = species_from_string(c["species_b"].get<std::string>());
            if (c.contains("measure")) cfg.measure = measure_from_string(c["measure"].get<std::string>());
        }
        if (root.contains("sweep")) {
            const auto& s = root["sweep"];
            reject_unknown(s, {"axis", "values", "pairs", "all_pairs", "measures"}, "sweep");
            SweepSpec spec;
            spec.base = cfg.params;
            spec.log_base = cfg.log_base;
            spec.axis = sweep_axis_from_string(s.at("axis").get<std::string>());
            spec.values = grid_of(s.at("values"));
            if (s.contains("pairs")) {
                for (const auto& pr : s["pairs"]) spec.pairs.push_back({mode_of(pr.at("a")), mode_of(pr.at("b"))});
            }
            if (s.contains("all_pairs")) {
                const auto& ap = s["all_pairs"];
                reject_unknown(ap, {"species_a", "species_b"}, "sweep.all_pairs");
                cfg.sweep_all_pairs = std::pair{species_from_string(ap.at("species_a").get<std::string>()),
                                                species_from_string(ap.at("species_b").get<std::string>())};
            }
            if (s.contains("measures")) {
                spec.measures.clear();
                for (const auto& m : s["measures"]) spec.measures.push_back(measure_from_string(m.get<std::string>()));
            }
            cfg.sweep = std::move(spec);
        }
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("config: ") + e.what());
    }
    return cfg;
}

SweepSpec RunConfig::sweep_spec() const {
    if (!sweep) throw InvalidParameter("config: no sweep section");
    SweepSpec spec = *sweep;
    spec.base = params;
    spec.log_base = log_base;
    if (sweep_all_pairs) {
        const auto more = all_pairs(params.n_sites, sweep_all_pairs->first, sweep_all_pairs->second);
        spec.pairs.insert(spec.pairs.end(), more.begin(), more.end());
    }
    return spec;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const InvalidParameter& e) {
        throw InvalidParameter(path.string() + ": " + e.what());
    }
}

}  // namespace omcorr
