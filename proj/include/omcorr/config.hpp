#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "omcorr/correlations.hpp"
#include "omcorr/model.hpp"
#include "omcorr/sweep.hpp"

namespace omcorr {

/// Parsed run configuration. Lattice keys are the LatticeParams field names;
/// see README.md for the schema.
struct RunConfig {
    LatticeParams params;
    LogBase log_base = LogBase::ten;
    int threads = 1;

    std::vector<double> detuning_grid;
    std::vector<double> drive_grid;

    Species species_a = Species::photon;
    Species species_b = Species::phonon;
    Measure measure = Measure::negativity;

    /// Sweep axis, values, explicit pairs and measures as read from the file.
    std::optional<SweepSpec> sweep;
    /// "all_pairs" request, expanded against the final n_sites by sweep_spec().
    std::optional<std::pair<Species, Species>> sweep_all_pairs;

    /// The sweep with the current params and log base applied.
    SweepSpec sweep_spec() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// "start:stop:count" (inclusive, evenly spaced) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

/// "photon:0" / "phonon:-3".
ModeRef parse_mode(const std::string& text);

}  // namespace omcorr
