#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omcorr/correlations.hpp"
#include "omcorr/meanfield.hpp"
#include "omcorr/network.hpp"
#include "omcorr/steadystate.hpp"

namespace omcorr {

/// Everything computed for one parameter point: mean fields, stability and,
/// when stable, the steady-state covariance matrix.
struct PointSolution {
    LatticeParams params;
    MeanFields mean_fields;
    StabilityReport stability;
    std::optional<CovarianceMatrix> covariance;
    double lyapunov_residual = 0.0;
    std::string error;  ///< why `covariance` is absent, if it is
};

PointSolution solve_point(const LatticeParams& p);

enum class SweepAxis { detuning, drive, thermal };

std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(std::string_view s);

/// Copy of `base` with the swept quantity set to `value` (drive keeps its phase).
LatticeParams with_axis_value(const LatticeParams& base, SweepAxis axis, double value);

struct ModePair {
    ModeRef a;
    ModeRef b;
};

/// All ordered pairs (site i, a) x (site j, b) with i, j over the lattice;
/// same-mode pairs are skipped.
std::vector<ModePair> all_pairs(int n_sites, Species a, Species b);

struct SweepSpec {
    LatticeParams base;
    SweepAxis axis = SweepAxis::detuning;
    std::vector<double> values;
    std::vector<ModePair> pairs;
    std::vector<Measure> measures{Measure::negativity};
    LogBase log_base = LogBase::ten;
};

void validate(const SweepSpec& spec);

struct ResultRecord {
    SweepAxis axis = SweepAxis::detuning;
    double axis_value = 0.0;
    ModeRef mode_a;
    ModeRef mode_b;
    Measure measure = Measure::negativity;
    std::optional<double> value;  ///< present only for stable points
    bool stable = false;
    BranchNote branch_note = BranchNote::unique;
    double spectral_abscissa = 0.0;
    std::string error;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// One record per (axis value, pair, measure), ordered by those indices.
/// Per-point failures are recorded in the affected records.
std::vector<ResultRecord> run_sweep(const SweepSpec& spec, int threads = 1, const Progress& progress = {});

// CSV files: UTF-8, LF line endings, a header row, doubles with 17 significant digits.

std::string format_double(double x);

void write_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path);
std::vector<ResultRecord> read_csv(const std::filesystem::path& path);

void write_stability_csv(const std::vector<StabilityCell>& cells, const std::filesystem::path& path);
void write_correlation_csv(const CorrelationMap& map, const std::filesystem::path& path);
/// Full covariance matrix, row-major, with a comment header naming the
/// quadrature ordering.
void write_covariance_csv(const CovarianceMatrix& v, const std::filesystem::path& path);

inline constexpr std::string_view kRecordHeader =
    "axis,axis_value,site_a,species_a,site_b,species_b,measure,value,stable,branch_note,"
    "spectral_abscissa,error";
inline constexpr std::string_view kStabilityHeader = "detuning,drive,spectral_abscissa,stable";
inline constexpr std::string_view kCorrelationHeader = "site_i,site_j,species_a,species_b,measure,value";

}  // namespace omcorr
