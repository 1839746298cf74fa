#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omcorr/meanfield.hpp"
#include "omcorr/model.hpp"
#include "omcorr/progress.hpp"

namespace omcorr {

/// Linearized drift matrix A of the 4N quadratures, site-major with
/// [X_j, Y_j, x_j, y_j] inside each site.
struct DriftMatrix {
    Eigen::MatrixXd matrix;
    int n_sites = 0;
    Boundary boundary = Boundary::open;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Diagonal diffusion matrix D; per site [kappa, kappa, gamma(2n+1), gamma(2n+1)].
struct DiffusionMatrix {
    Eigen::VectorXd diagonal;
    int n_sites = 0;

    int dim() const { return static_cast<int>(diagonal.size()); }
    Eigen::MatrixXd dense() const { return diagonal.asDiagonal(); }
};

struct StabilityReport {
    double spectral_abscissa = 0.0;
    double margin = 0.0;  ///< tolerance tol_stab = 1e-9 ||A||_F used for the decision
    bool stable = false;
    bool marginal = false;  ///< |abscissa| <= margin; treated as not stable
};

/// On-site 4x4 block B.
Eigen::Matrix4d site_block(const LatticeParams& p, const MeanFields& mf);
/// Nearest-neighbour 4x4 block C (photon hopping J, phonon hopping K).
Eigen::Matrix4d hopping_block(const LatticeParams& p);

DriftMatrix assemble_drift(const LatticeParams& p, const MeanFields& mf);
DiffusionMatrix assemble_diffusion(const LatticeParams& p);

/// Largest real part over the eigenvalues of a square real matrix.
double spectral_abscissa(const Eigen::MatrixXd& a);

inline constexpr double kStabilityRelTol = 1e-9;

StabilityReport classify_stability(const DriftMatrix& a);

/// Same decision without forming A. Every site carries the same block B, so
/// A = I (x) B + T (x) C with T the symmetric neighbour matrix of the chain;
/// rotating into the eigenbasis of T leaves 4x4 blocks B + lambda_k C with
/// lambda_k = 2 cos(k pi / (N+1)) (open) or 2 cos(2 pi k / N) (periodic).
StabilityReport classify_stability_structured(const LatticeParams& p, const MeanFields& mf);

struct StabilityCell {
    double detuning = 0.0;
    double drive = 0.0;
    double spectral_abscissa = 0.0;
    bool stable = false;
    BranchNote branch_note = BranchNote::unique;
    std::string error;  ///< non-empty when the cell could not be evaluated
};

/// Stability over a detuning x drive-magnitude grid, detuning-major. Mean
/// fields are re-solved at every cell and classified with
/// classify_stability_structured. Cells are evaluated on `threads`
/// workers; the output order is independent of the worker count.
std::vector<StabilityCell> stability_map(const LatticeParams& base,
                                         const std::vector<double>& detuning_grid,
                                         const std::vector<double>& drive_grid,
                                         int threads = 1, const Progress& progress = {});

}  // namespace omcorr
