#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "omcorr/errors.hpp"
#include "omcorr/network.hpp"
#include "omcorr/steadystate.hpp"

using namespace omcorr;
using omcorr::testing::reference_params;
using omcorr::testing::random_stable;

namespace {

CovarianceMatrix solve_params(const LatticeParams& p) {
    return steady_state_covariance(assemble_drift(p, solve_mean_fields(p)), assemble_diffusion(p));
}

double rel_diff(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return (x - y).norm() / std::max(y.norm(), 1e-300);
}

Eigen::MatrixXd random_diffusion(int n, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    return m * m.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("uncoupled site balances damping against noise") {
    for (double nbar : {0.0, 0.5, 3.0, 12.5}) {
        LatticeParams p = reference_params(1, -1.1, 20.0, nbar);
        p.g0 = 0.0;
        const CovarianceMatrix v = solve_params(p);
        Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
        expected.diagonal() << 0.5, 0.5, nbar + 0.5, nbar + 0.5;
        CHECK((v.matrix - expected).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("zero-temperature decoupled chain sits in the vacuum") {
    LatticeParams p = reference_params(7, -2.5, 15.0);
    p.g0 = 0.0;
    const CovarianceMatrix v = solve_params(p);
    CHECK((v.matrix - 0.5 * Eigen::MatrixXd::Identity(28, 28)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("Schur solver agrees with the Kronecker solve") {
    for (double det : {-2.5, -1.7, -1.3}) {
        const LatticeParams p = reference_params(3, det, 15.0);
        const Eigen::MatrixXd a = assemble_drift(p, solve_mean_fields(p)).matrix;
        const Eigen::MatrixXd d = assemble_diffusion(p).dense();
        const LyapunovSolution fast = solve_lyapunov(a, d);
        const LyapunovSolution dense = solve_lyapunov_vectorized(a, d);
        CHECK(fast.relative_residual <= kLyapunovResidualTol);
        CHECK(rel_diff(fast.v, dense.v) <= 1e-8);
    }
}

TEST_CASE("Kronecker solve refuses large systems") {
    const Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(28, 28);
    CHECK_THROWS_AS(solve_lyapunov_vectorized(a, Eigen::MatrixXd::Identity(28, 28)), InvalidParameter);
}

TEST_CASE("random stable systems: three independent routes agree") {
    std::mt19937 rng(20241016);
    std::uniform_int_distribution<int> pick(1, 3);
    for (int draw = 0; draw < 20; ++draw) {
        const int n = 4 * pick(rng);
        const Eigen::MatrixXd a = random_stable(n, rng);
        const Eigen::MatrixXd d = random_diffusion(n, rng);
        const LyapunovSolution fast = solve_lyapunov(a, d);
        const LyapunovSolution dense = solve_lyapunov_vectorized(a, d);
        const LyapunovSolution flow = integrate_to_steady_state(a, d, 0.5, 1e4, 1e-12);
        CHECK(rel_diff(fast.v, dense.v) <= 1e-6);
        CHECK(rel_diff(fast.v, flow.v) <= 1e-6);
        CHECK(fast.v.isApprox(fast.v.transpose(), 0.0));
    }
}

TEST_CASE("eleven-site chain: Schur solve matches time integration") {
    const LatticeParams p = reference_params(11, -2.5, 15.0);
    const Eigen::MatrixXd a = assemble_drift(p, solve_mean_fields(p)).matrix;
    const Eigen::MatrixXd d = assemble_diffusion(p).dense();
    const LyapunovSolution fast = solve_lyapunov(a, d);
    const LyapunovSolution flow = integrate_to_steady_state(a, d, 25.0, 2e5, 1e-11);
    CHECK(rel_diff(fast.v, flow.v) <= 1e-6);
}

TEST_CASE("covariance is linear in the diffusion matrix") {
    const LatticeParams p = reference_params(5, -1.7, 15.0, 0.3);
    const Eigen::MatrixXd a = assemble_drift(p, solve_mean_fields(p)).matrix;
    const Eigen::MatrixXd d = assemble_diffusion(p).dense();
    const Eigen::MatrixXd base = solve_lyapunov(a, d).v;
    for (double s : {0.25, 3.0, 40.0}) {
        CHECK(rel_diff(solve_lyapunov(a, s * d).v, s * base) <= 1e-12);
    }
}

TEST_CASE("phonon variances grow with the bath occupation") {
    double prev = 0.0;
    for (double nbar : {0.0, 0.1, 0.5, 2.5, 12.5}) {
        const CovarianceMatrix v = solve_params(reference_params(5, -2.5, 15.0, nbar));
        const double var = v.matrix(SiteIndex{0}.offset(5) * 4 + 2, SiteIndex{0}.offset(5) * 4 + 2);
        CHECK(var > prev);
        prev = var;
    }
}

TEST_CASE("reference-point covariances are physical") {
    for (double det : {-2.5, -2.1, -1.7, -1.3}) {
        const CovarianceMatrix v = solve_params(reference_params(21, det, 15.0));
        const PhysicalityReport r = physicality_check(v.matrix);
        CHECK(r.physical);
        CHECK(r.min_symplectic_eigenvalue >= kVacuumVariance - kPhysicalityTol);
    }
}

TEST_CASE("symplectic spectrum and physicality threshold") {
    const auto vac = symplectic_eigenvalues(0.5 * Eigen::MatrixXd::Identity(6, 6));
    REQUIRE(vac.size() == 3);
    for (double nu : vac) CHECK(nu == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(physicality_check(0.5 * Eigen::MatrixXd::Identity(4, 4)).physical);
    CHECK_FALSE(physicality_check(0.25 * Eigen::MatrixXd::Identity(4, 4)).physical);

    // A thermal mode with variance n + 1/2 next to a squeezed vacuum.
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
    v.diagonal() << 2.5, 2.5, 0.5 * std::exp(1.2), 0.5 * std::exp(-1.2);
    const auto nu = symplectic_eigenvalues(v);
    CHECK(nu[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(2.5).epsilon(1e-12));

    const Eigen::MatrixXd omega = symplectic_form(2);
    CHECK((omega + omega.transpose()).isZero(0.0));
    CHECK((omega * omega + Eigen::MatrixXd::Identity(4, 4)).isZero(0.0));
}

TEST_CASE("failure modes") {
    SUBCASE("unstable drift") {
        Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(4, 4);
        a(2, 2) = 0.01;
        CHECK_THROWS_AS(solve_lyapunov(a, Eigen::MatrixXd::Identity(4, 4)), NoSteadyState);
    }
    SUBCASE("marginal drift") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
        a(0, 1) = 1.0;
        a(1, 0) = -1.0;
        CHECK_THROWS_AS(solve_lyapunov(a, Eigen::MatrixXd::Identity(2, 2)), NoSteadyState);
    }
    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(solve_lyapunov(-Eigen::MatrixXd::Identity(4, 4), Eigen::MatrixXd::Identity(3, 3)),
                        InvalidParameter);
    }
    SUBCASE("integration timeout") {
        Eigen::MatrixXd a(2, 2);
        a << -1e-3, 1.0, -1.0, -1e-3;
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
        d(0, 0) = 1.0;
        try {
            integrate_to_steady_state(a, d, 1.0, 10.0, 1e-12);
            FAIL("expected timeout");
        } catch (const IntegrationTimeout& e) {
            CHECK(e.last_residual() > 1e-12);
        }
    }
}
