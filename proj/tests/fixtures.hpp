#pragma once

#include <random>

#include <Eigen/Dense>

#include "omcorr/model.hpp"

namespace omcorr::testing {

/// Normalized parameters shared by the reference runs (kappa, g0, gamma,
/// omega_m, K); detuning and drive vary per experiment.
inline LatticeParams reference_params(int n_sites, double detuning, double drive, double nbar_m = 0.0) {
    LatticeParams p;
    p.n_sites = n_sites;
    p.detuning = detuning;
    p.kappa = 0.1;
    p.gamma = 0.002;
    p.omega_m = 0.1;
    p.g0 = 1e-4;
    p.hop_optical = 1.0;
    p.hop_mechanical = 0.05;
    p.drive = {drive, 0.0};
    p.nbar_m = nbar_m;
    return p;
}

/// Random stable matrix: symmetric part shifted so every eigenvalue has
/// real part <= -shift, plus a random skew part.
inline Eigen::MatrixXd random_stable(int n, std::mt19937& rng, double shift = 0.2) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::MatrixXd skew = 0.5 * (m - m.transpose());
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().maxCoeff();
    sym -= (top + shift) * Eigen::MatrixXd::Identity(n, n);
    return sym + skew;
}

}  // namespace omcorr::testing
