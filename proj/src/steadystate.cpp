#include "omcorr/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "omcorr/errors.hpp"

namespace omcorr {

namespace {

void require_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d, const char* who) {
    if (a.rows() != a.cols() || d.rows() != d.cols() || a.rows() != d.rows() || a.rows() == 0) {
        throw InvalidParameter(std::string(who) + ": A and D must be square and of equal size");
    }
    if (!a.allFinite() || !d.allFinite()) throw InvalidParameter(std::string(who) + ": non-finite input");
}

struct SchurBlock {
    Eigen::Index start;
    Eigen::Index size;
};

std::vector<SchurBlock> diagonal_blocks(const Eigen::MatrixXd& t) {
    std::vector<SchurBlock> blocks;
    const Eigen::Index n = t.rows();
    for (Eigen::Index i = 0; i < n;) {
        const Eigen::Index s = (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
        blocks.push_back({i, s});
        i += s;
    }
    return blocks;
}

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

// Solves T Z + Z S^T = R for Z (r x s, r, s <= 2).
Eigen::MatrixXd small_sylvester(const Eigen::MatrixXd& t, const Eigen::MatrixXd& s, const Eigen::MatrixXd& r) {
    const Eigen::Index m = t.rows();
    const Eigen::Index k = s.rows();
    SmallMatrix op = SmallMatrix::Zero(m * k, m * k);
    for (Eigen::Index q = 0; q < k; ++q) {
        op.block(q * m, q * m, m, m) += t;
        for (Eigen::Index p = 0; p < k; ++p) op.block(q * m, p * m, m, m).diagonal().array() += s(q, p);
    }
    SmallVector rhs(m * k);
    for (Eigen::Index q = 0; q < k; ++q) rhs.segment(q * m, m) = r.col(q);
    const SmallVector z = op.fullPivLu().solve(rhs);
    Eigen::MatrixXd out(m, k);
    for (Eigen::Index q = 0; q < k; ++q) out.col(q) = z.segment(q * m, m);
    return out;
}

}  // namespace

double lyapunov_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& v, const Eigen::MatrixXd& d) {
    const double dn = d.norm();
    const Eigen::MatrixXd r = a * v + v * a.transpose() + d;
    return dn > 0.0 ? r.norm() / dn : r.norm();
}

LyapunovSolution solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
    require_pair(a, d, "solve_lyapunov");
    const Eigen::Index n = a.rows();

    Eigen::RealSchur<Eigen::MatrixXd> schur(a, /*computeU=*/true);
    if (schur.info() != Eigen::Success) throw SolverFailure("solve_lyapunov: real Schur reduction did not converge");
    const Eigen::MatrixXd& t = schur.matrixT();
    const Eigen::MatrixXd& u = schur.matrixU();
    const auto blocks = diagonal_blocks(t);

    double abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) {
        abscissa = std::max(abscissa, t.block(b.start, b.start, b.size, b.size).trace() / static_cast<double>(b.size));
    }
    if (abscissa >= 0.0) {
        throw NoSteadyState("solve_lyapunov: drift matrix is not stable (spectral abscissa " +
                            std::to_string(abscissa) + ")");
    }

    // T Y + Y T^T = F with F = -U^T D U, solved block column by block column
    // from the right, each column by back-substitution from the bottom.
    const Eigen::MatrixXd f = -(u.transpose() * d * u);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
    for (auto jb = blocks.rbegin(); jb != blocks.rend(); ++jb) {
        const Eigen::Index jc = jb->start;
        const Eigen::Index sj = jb->size;
        const Eigen::Index tail = n - jc - sj;
        Eigen::MatrixXd r = f.middleCols(jc, sj);
        if (tail > 0) r.noalias() -= y.rightCols(tail) * t.block(jc, jc + sj, sj, tail).transpose();
        const Eigen::MatrixXd s = t.block(jc, jc, sj, sj);

        Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, sj);
        for (auto ib = blocks.rbegin(); ib != blocks.rend(); ++ib) {
            const Eigen::Index ic = ib->start;
            const Eigen::Index si = ib->size;
            const Eigen::Index below = n - ic - si;
            Eigen::MatrixXd rhs = r.middleRows(ic, si);
            if (below > 0) rhs.noalias() -= t.block(ic, ic + si, si, below) * z.bottomRows(below);
            z.middleRows(ic, si) = small_sylvester(t.block(ic, ic, si, si), s, rhs);
        }
        y.middleCols(jc, sj) = z;
    }

    LyapunovSolution out;
    out.v = u * y * u.transpose();
    out.v = 0.5 * (out.v + out.v.transpose()).eval();
    out.relative_residual = lyapunov_residual(a, out.v, d);
    if (!(out.relative_residual <= kLyapunovResidualTol)) {
        throw SolverFailure("solve_lyapunov: relative residual " + std::to_string(out.relative_residual) +
                            " above tolerance");
    }
    return out;
}

LyapunovSolution solve_lyapunov_vectorized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d) {
    require_pair(a, d, "solve_lyapunov_vectorized");
    const Eigen::Index n = a.rows();
    if (n > kVectorizedMaxDim) {
        throw InvalidParameter("solve_lyapunov_vectorized: dimension " + std::to_string(n) + " exceeds " +
                               std::to_string(kVectorizedMaxDim));
    }
    // Column-major vec: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        op.block(i * n, i * n, n, n) += a;
        for (Eigen::Index j = 0; j < n; ++j) op.block(i * n, j * n, n, n).diagonal().array() += a(i, j);
    }
    const Eigen::VectorXd rhs = -d.reshaped();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
    if (!lu.isInvertible()) throw SolverFailure("solve_lyapunov_vectorized: singular Kronecker operator");
    const Eigen::VectorXd x = lu.solve(rhs);

    LyapunovSolution out;
    out.v = x.reshaped(n, n);
    out.v = 0.5 * (out.v + out.v.transpose()).eval();
    out.relative_residual = lyapunov_residual(a, out.v, d);
    if (!(out.relative_residual <= 1e-10)) {
        throw SolverFailure("solve_lyapunov_vectorized: relative residual " + std::to_string(out.relative_residual));
    }
    return out;
}

LyapunovSolution integrate_to_steady_state(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d, double step,
                                           double horizon, double tol) {
    require_pair(a, d, "integrate_to_steady_state");
    if (!(step > 0.0) || !(horizon > 0.0) || !(tol > 0.0)) {
        throw InvalidParameter("integrate_to_steady_state: step, horizon and tol must be > 0");
    }
    const Eigen::Index n = a.rows();

    // Exact propagator over one step (Van Loan): exp(h [[-A, D], [0, A^T]]).
    // The exp(-hA) corner grows without bound, so it is formed on a short
    // sub-step and the pair (M, Q) is doubled: M' = M M, Q' = M Q M^T + Q.
    int doublings = 0;
    double sub = step;
    const double growth = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (sub * growth > 1.0 && doublings < 60) {
        sub *= 0.5;
        ++doublings;
    }
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = -a;
    block.topRightCorner(n, n) = d;
    block.bottomRightCorner(n, n) = a.transpose();
    const Eigen::MatrixXd e = (sub * block).exp();
    Eigen::MatrixXd m = e.bottomRightCorner(n, n).transpose();
    Eigen::MatrixXd q = m * e.topRightCorner(n, n);
    q = 0.5 * (q + q.transpose()).eval();
    for (int k = 0; k < doublings; ++k) {
        q = (m * q * m.transpose() + q).eval();
        q = 0.5 * (q + q.transpose()).eval();
        m = (m * m).eval();
    }

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i, i) = (a(i, i) < 0.0 && d(i, i) > 0.0) ? d(i, i) / (-2.0 * a(i, i)) : kVacuumVariance;
    }

    const double dn = d.norm() > 0.0 ? d.norm() : 1.0;
    double t = 0.0;
    for (;;) {
        const double rate = (a * v + v * a.transpose() + d).norm() / dn;
        if (rate <= tol) return {v, rate};
        if (t >= horizon) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "integrate_to_steady_state: horizon %g exhausted, residual %.3g",
                          horizon, rate);
            throw IntegrationTimeout(msg, rate);
        }
        v = m * v * m.transpose() + q;
        v = 0.5 * (v + v.transpose()).eval();
        t += step;
    }
}

CovarianceMatrix steady_state_covariance(const DriftMatrix& a, const DiffusionMatrix& d) {
    if (a.n_sites != d.n_sites) throw InvalidParameter("steady_state_covariance: site count mismatch");
    return {solve_lyapunov(a.matrix, d.dense()).v, a.n_sites};
}

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& v) {
    if (v.rows() != v.cols() || v.rows() % 2 != 0 || v.rows() == 0) {
        throw InvalidParameter("symplectic_eigenvalues: covariance matrix must be square with even dimension");
    }
    const int modes = static_cast<int>(v.rows() / 2);
    Eigen::EigenSolver<Eigen::MatrixXd> es(symplectic_form(modes) * v, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw SolverFailure("symplectic_eigenvalues: eigenvalue iteration failed");
    std::vector<double> moduli(static_cast<std::size_t>(v.rows()));
    for (Eigen::Index i = 0; i < v.rows(); ++i) moduli[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(moduli.begin(), moduli.end());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(modes));
    for (std::size_t i = 0; i < moduli.size(); i += 2) out.push_back(moduli[i]);
    return out;
}

PhysicalityReport physicality_check(const Eigen::MatrixXd& v) {
    const auto nu = symplectic_eigenvalues(v);
    PhysicalityReport r;
    r.min_symplectic_eigenvalue = nu.front();
    r.physical = r.min_symplectic_eigenvalue >= kVacuumVariance - kPhysicalityTol;
    return r;
}

}  // namespace omcorr
