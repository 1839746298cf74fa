#include "omcorr/network.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "omcorr/errors.hpp"
#include "omcorr/parallel.hpp"

namespace omcorr {

Eigen::Matrix4d site_block(const LatticeParams& p, const MeanFields& mf) {
    const double det = effective_detuning(p, mf);
    const double re = 2.0 * p.g0 * mf.alpha.real();
    const double im = 2.0 * p.g0 * mf.alpha.imag();
    Eigen::Matrix4d b;
    // clang-format off
    b << -p.kappa, -det,      -im,         0.0,
          det,     -p.kappa,   re,         0.0,
          0.0,      0.0,      -p.gamma,    p.omega_m,
          re,       im,       -p.omega_m, -p.gamma;
    // clang-format on
    return b;
}

Eigen::Matrix4d hopping_block(const LatticeParams& p) {
    Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
    c(0, 1) = -p.hop_optical;
    c(1, 0) = p.hop_optical;
    c(2, 3) = -p.hop_mechanical;
    c(3, 2) = p.hop_mechanical;
    return c;
}

DriftMatrix assemble_drift(const LatticeParams& p, const MeanFields& mf) {
    validate(p);
    const int n = p.n_sites;
    DriftMatrix a{Eigen::MatrixXd::Zero(4 * n, 4 * n), n, p.boundary};
    const Eigen::Matrix4d b = site_block(p, mf);
    const Eigen::Matrix4d c = hopping_block(p);
    for (int j = 0; j < n; ++j) {
        a.matrix.block<4, 4>(4 * j, 4 * j) = b;
        for (int step : {-1, 1}) {
            int k = j + step;
            if (k < 0 || k >= n) {
                if (p.boundary == Boundary::open) continue;
                k = (k + n) % n;
            }
            a.matrix.block<4, 4>(4 * j, 4 * k) += c;
        }
    }
    return a;
}

DiffusionMatrix assemble_diffusion(const LatticeParams& p) {
    validate(p);
    const double mech = p.gamma * (2.0 * p.nbar_m + 1.0);
    DiffusionMatrix d{Eigen::VectorXd(4 * p.n_sites), p.n_sites};
    for (int j = 0; j < p.n_sites; ++j) d.diagonal.segment<4>(4 * j) << p.kappa, p.kappa, mech, mech;
    return d;
}

double spectral_abscissa(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InvalidParameter("spectral_abscissa: matrix must be square and non-empty");
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw SolverFailure("spectral_abscissa: eigenvalue iteration did not converge");
    return es.eigenvalues().real().maxCoeff();
}

namespace {

StabilityReport decide(double abscissa, double frobenius) {
    StabilityReport r;
    r.spectral_abscissa = abscissa;
    r.margin = kStabilityRelTol * frobenius;
    r.marginal = std::abs(abscissa) <= r.margin;
    r.stable = abscissa < -r.margin;
    return r;
}

}  // namespace

StabilityReport classify_stability(const DriftMatrix& a) {
    return decide(spectral_abscissa(a.matrix), a.matrix.norm());
}

StabilityReport classify_stability_structured(const LatticeParams& p, const MeanFields& mf) {
    validate(p);
    const int n = p.n_sites;
    const Eigen::Matrix4d b = site_block(p, mf);
    const Eigen::Matrix4d c = hopping_block(p);
    double abscissa = -std::numeric_limits<double>::infinity();
    double frob2 = 0.0;  // Frobenius norm is unchanged by the orthogonal rotation
    for (int k = 0; k < n; ++k) {
        const double lambda = p.boundary == Boundary::open
                                  ? 2.0 * std::cos(std::numbers::pi * (k + 1) / (n + 1))
                                  : 2.0 * std::cos(2.0 * std::numbers::pi * k / n);
        const Eigen::Matrix4d blk = b + lambda * c;
        Eigen::EigenSolver<Eigen::Matrix4d> es(blk, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) throw SolverFailure("classify_stability_structured: eigenvalue iteration failed");
        abscissa = std::max(abscissa, es.eigenvalues().real().maxCoeff());
        frob2 += blk.squaredNorm();
    }
    return decide(abscissa, std::sqrt(frob2));
}

std::vector<StabilityCell> stability_map(const LatticeParams& base, const std::vector<double>& detuning_grid,
                                         const std::vector<double>& drive_grid, int threads,
                                         const Progress& progress) {
    for (double x : detuning_grid) {
        if (!std::isfinite(x)) throw InvalidParameter("stability_map: non-finite detuning");
    }
    for (double x : drive_grid) {
        if (!std::isfinite(x) || x < 0.0) throw InvalidParameter("stability_map: drive magnitudes must be finite and >= 0");
    }
    validate(base);
    const double phase = base.drive_phase();
    std::vector<StabilityCell> cells(detuning_grid.size() * drive_grid.size());
    detail::ProgressTicker ticker(progress, cells.size());
    detail::parallel_for(cells.size(), threads, [&](std::size_t idx) {
        StabilityCell& cell = cells[idx];
        cell.detuning = detuning_grid[idx / drive_grid.size()];
        cell.drive = drive_grid[idx % drive_grid.size()];
        LatticeParams p = base;
        p.detuning = cell.detuning;
        p.drive = drive_from_polar(cell.drive, phase);
        try {
            const MeanFields mf = solve_mean_fields(p);
            cell.branch_note = mf.branch_note;
            const StabilityReport r = classify_stability_structured(p, mf);
            cell.spectral_abscissa = r.spectral_abscissa;
            cell.stable = r.stable;
        } catch (const std::exception& e) {
            cell.spectral_abscissa = std::numeric_limits<double>::quiet_NaN();
            cell.stable = false;
            cell.error = e.what();
        }
        ticker.tick();
    });
    return cells;
}

}  // namespace omcorr
