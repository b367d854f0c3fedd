#include <doctest.h>

#include <cmath>

#include "qks/conic.hpp"
#include "qks/rng.hpp"

using namespace qks;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("conic") {

TEST_CASE("bounded lp") {
    // min -x subject to 0 <= x <= 2  ->  x = 2
    ConeProgram p;
    p.n_vars = 1;
    p.objective = VectorXd::Constant(1, -1.0);
    MatrixXd A(2, 1);
    A << 1.0, -1.0;
    VectorXd b(2);
    b << 0.0, 2.0;
    p.add_nonneg(A, b);
    const auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x(0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.objective_value == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("equality block") {
    // min x + y subject to x + y = 3, x - y = 1  ->  (2, 1)
    ConeProgram p;
    p.n_vars = 2;
    p.objective = VectorXd::Ones(2);
    MatrixXd A(2, 2);
    A << 1.0, 1.0, 1.0, -1.0;
    VectorXd b(2);
    b << -3.0, -1.0;
    p.add_zero(A, b);
    const auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x(0) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.x(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("second-order cone projection") {
    // min t subject to t >= ||v - v0||, v free  ->  t = 0 is blocked by
    // fixing v via equalities; distance from origin to (3, 4) is 5.
    ConeProgram p;
    p.n_vars = 3; // t, v1, v2
    p.objective = VectorXd::Zero(3);
    p.objective(0) = 1.0;
    MatrixXd Aeq = MatrixXd::Zero(2, 3);
    Aeq(0, 1) = 1.0;
    Aeq(1, 2) = 1.0;
    VectorXd beq(2);
    beq << -3.0, -4.0;
    p.add_zero(Aeq, beq);
    MatrixXd Asoc = MatrixXd::Identity(3, 3);
    p.add_soc(Asoc, VectorXd::Zero(3));
    const auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x(0) == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("infeasible and unbounded detection") {
    ConeProgram inf;
    inf.n_vars = 1;
    inf.objective = VectorXd::Ones(1);
    MatrixXd A(2, 1);
    A << 1.0, -1.0;
    VectorXd b(2);
    b << -2.0, 1.0; // x >= 2 and x <= -1
    inf.add_nonneg(A, b);
    CHECK(solve(inf).status == SolveStatus::Infeasible);

    ConeProgram unb;
    unb.n_vars = 1;
    unb.objective = VectorXd::Constant(1, -1.0);
    unb.add_nonneg(MatrixXd::Identity(1, 1), VectorXd::Zero(1)); // x >= 0
    CHECK(solve(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("validate rejects malformed programs") {
    ConeProgram p;
    p.n_vars = 2;
    p.objective = VectorXd::Ones(1); // wrong length
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.objective = VectorXd::Ones(2);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument); // no blocks
    // mismatched block width is rejected at insertion time
    CHECK_THROWS_AS(p.add_nonneg(MatrixXd::Identity(3, 3), VectorXd::Zero(3)),
                    std::invalid_argument);
}

TEST_CASE("spectral utilities") {
    MatrixXd M(2, 2);
    M << 2.0, 0.0, 0.0, -1.0;
    CHECK(min_eig(M) == doctest::Approx(-1.0));
    const MatrixXd S = spectral_shift(M);
    CHECK(min_eig(S) == doctest::Approx(0.0).epsilon(1e-12));
    MatrixXd P(2, 2);
    P << 4.0, 0.0, 0.0, 9.0;
    CHECK(spectral_shift(P).isApprox(P));
    const MatrixXd R = psd_sqrt(P);
    CHECK((R * R - P).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(psd_sqrt(M), std::invalid_argument);
}

TEST_CASE("quadratic epigraph identity holds on random points") {
    // (A x + b) in SOC  <=>  1/2 beta' M beta <= t for any (beta, t)
    SplitMix64 rng(314);
    MatrixXd M(3, 3);
    M << 2.0, 0.3, 0.1, 0.3, 1.5, 0.2, 0.1, 0.2, 1.0;
    const ConeBlock blk = quad_epigraph(M, {0, 1, 2}, 3, 4);
    REQUIRE(blk.kind == BlockKind::Soc);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        Eigen::Vector4d x;
        for (int j = 0; j < 4; ++j) x(j) = 4.0 * rng.uniform() - 2.0;
        const VectorXd v = blk.A * x + blk.b;
        const bool in_cone = v(0) >= v.tail(v.size() - 1).norm();
        const double quad = 0.5 * x.head(3).dot(M * x.head(3));
        const bool feas = quad <= x(3);
        if (std::abs(quad - x(3)) > 1e-9) {
            CHECK(in_cone == feas);
            ++checked;
        }
    }
    CHECK(checked > 9000);
}

} // TEST_SUITE
