#pragma once

#include <vector>

#include <Eigen/Dense>

#include "omcorr/network.hpp"

namespace omcorr {

/// Steady-state covariance matrix V_pq = <u_p u_q + u_q u_p>/2 (vacuum = 1/2).
struct CovarianceMatrix {
    Eigen::MatrixXd matrix;
    int n_sites = 0;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

struct LyapunovSolution {
    Eigen::MatrixXd v;
    double relative_residual = 0.0;  ///< ||A V + V A^T + D||_F / ||D||_F
};

/// Relative residual of A V + V A^T + D.
double lyapunov_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& v, const Eigen::MatrixXd& d);

inline constexpr double kLyapunovResidualTol = 1e-8;
inline constexpr int kVectorizedMaxDim = 24;

/// Solves A V + V A^T = -D for stable A by Bartels-Stewart: real Schur
/// reduction of A followed by block back-substitution on the quasi-triangular
/// equation. Throws NoSteadyState if A has an eigenvalue with Re >= 0 and
/// SolverFailure if the residual exceeds kLyapunovResidualTol.
LyapunovSolution solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d);

/// Dense Kronecker solve (A (+) A) vec V = -vec D. Limited to dim <= 24.
LyapunovSolution solve_lyapunov_vectorized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d);

/// Propagates dV/dt = A V + V A^T + D from the diagonal vacuum/thermal state
/// with the exact step V <- M V M^T + Q_h, M = exp(hA). Stops when
/// ||dV/dt||_F <= tol ||D||_F; throws IntegrationTimeout past `horizon`.
LyapunovSolution integrate_to_steady_state(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                           double step, double horizon, double tol);

CovarianceMatrix steady_state_covariance(const DriftMatrix& a, const DiffusionMatrix& d);

/// Block-diagonal symplectic form with [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Symplectic eigenvalues (moduli of the eigenvalues of i Omega V), one per
/// mode, ascending.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& v);

struct PhysicalityReport {
    double min_symplectic_eigenvalue = 0.0;
    bool physical = false;
};

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kPhysicalityTol = 1e-9;

PhysicalityReport physicality_check(const Eigen::MatrixXd& v);

}  // namespace omcorr
