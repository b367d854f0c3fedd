#include <doctest.h>

#include <cmath>

#include "qks/bounds.hpp"

using namespace qks;
using Eigen::VectorXd;

TEST_SUITE("bounds") {

TEST_CASE("kappa") {
    CHECK(kappa(0.01) == doctest::Approx(std::sqrt(2.0 * std::log(100.0))).epsilon(1e-12));
    CHECK(kappa(0.01) == doctest::Approx(3.03485).epsilon(1e-5));
    CHECK(kappa(2.5e-4) == doctest::Approx(4.07283).epsilon(1e-5));
    CHECK(kappa(1.0) == 0.0);
    CHECK_THROWS_AS(kappa(0.0), std::invalid_argument);
    CHECK_THROWS_AS(kappa(1.5), std::invalid_argument);
}

TEST_CASE("per-point reliability bound") {
    // oracle: ceil( (c ||beta|| / gamma_x)^2 * ln(1/delta) / 2 )
    const double raw = n_reliable_point_raw(3.0, 0.5, CircuitKind::GATES, 0.01);
    CHECK(raw == doctest::Approx(0.5 * 36.0 * std::log(100.0)).epsilon(1e-12));
    CHECK(n_reliable_point(3.0, 0.5, CircuitKind::GATES, 0.01) ==
          static_cast<std::int64_t>(std::ceil(raw)));
    // swap circuit costs exactly 4x
    CHECK(n_reliable_point_raw(3.0, 0.5, CircuitKind::SWAP, 0.01) ==
          doctest::Approx(4.0 * raw).epsilon(1e-12));
    // worked values
    CHECK(n_reliable_point(1.0, 1.0, CircuitKind::GATES, std::exp(-2.0)) == 1);
    CHECK(n_reliable_point(1.0, 1.0, CircuitKind::SWAP, std::exp(-2.0)) == 4);
    CHECK(n_reliable_point(2.0, 0.5, CircuitKind::GATES, 0.01) == 37);
}

TEST_CASE("dataset-uniform margin bound matches worked values") {
    // ||beta|| = 2, gamma = 0.5, M = 100, delta = 0.01, gates:
    // (1/ (2 * 0.25)) * 4 * ln(10000) = 8 ln(1e4) ~ 73.68 -> 74
    CHECK(n_sg_raw(2.0, 0.5, CircuitKind::GATES, 100, 0.01) ==
          doctest::Approx(8.0 * std::log(10000.0)).epsilon(1e-12));
    CHECK(n_sg(2.0, 0.5, CircuitKind::GATES, 100, 0.01) == 74);
    // worked values: ||beta|| = 2, gamma = 0.5, M = 40 -> 67 on the gates
    // circuit and 4x that pre-ceiling (266) on swap
    CHECK(n_sg(2.0, 0.5, CircuitKind::GATES, 40, 0.01) == 67);
    CHECK(n_sg(2.0, 0.5, CircuitKind::SWAP, 40, 0.01) == 266);
    // M = 1 reduces to the per-point bound with gamma_x = gamma
    CHECK(n_sg_raw(2.0, 0.5, CircuitKind::GATES, 1, 0.01) ==
          doctest::Approx(n_reliable_point_raw(2.0, 0.5, CircuitKind::GATES, 0.01))
              .epsilon(1e-12));
}

TEST_CASE("worst-case and margin-risk bounds reduce to n_sg") {
    // worst case substitutes m_sv C^2 for ||beta||^2
    const double wc = n_sg_worstcase_raw(40, 0.5, 1.0, CircuitKind::GATES, 40, 0.01);
    CHECK(wc == doctest::Approx(n_sg_raw(std::sqrt(40.0 * 0.25), 1.0,
                                         CircuitKind::GATES, 40, 0.01))
                    .epsilon(1e-12));
    CHECK(n_sg_worstcase(4, 1.0, 1.0, CircuitKind::GATES, 40, 0.01) == 17);
    // C doubling quadruples the bound pre-ceiling
    CHECK(n_sg_worstcase_raw(4, 2.0, 1.0, CircuitKind::GATES, 40, 0.01) ==
          doctest::Approx(4.0 * n_sg_worstcase_raw(4, 1.0, 1.0, CircuitKind::GATES,
                                                   40, 0.01))
              .epsilon(1e-12));
    // margin risk is n_sg with gamma = 1 and M = m
    CHECK(n_margin_risk_raw(4.0, CircuitKind::GATES, 40, 0.01) ==
          doctest::Approx(n_sg_raw(4.0, 1.0, CircuitKind::GATES, 40, 0.01))
              .epsilon(1e-12));
    CHECK(n_margin_risk(1.0, CircuitKind::GATES, 40, 0.01) == 5);
    CHECK(n_margin_risk(1.0, CircuitKind::SWAP, 40, 0.01) == 17);
}

TEST_CASE("precise-kernel bound") {
    // oracle: ceil( (c^2 / (2 eps^2)) m_sv M ln(m_sv M / delta) )
    const std::int64_t expect = static_cast<std::int64_t>(
        std::ceil(50.0 * 8.0 * 40.0 * std::log(8.0 * 40.0 / 0.01)));
    CHECK(n_precise(8, 40, 0.1, CircuitKind::GATES, 0.01) == expect);
    CHECK(n_precise_raw(8, 40, 0.1, CircuitKind::GATES, 0.01) ==
          doctest::Approx(50.0 * 320.0 * std::log(32000.0)).epsilon(1e-12));
    // eps halving quadruples the bound pre-ceiling
    CHECK(n_precise_raw(8, 40, 0.05, CircuitKind::GATES, 0.01) ==
          doctest::Approx(4.0 * n_precise_raw(8, 40, 0.1, CircuitKind::GATES, 0.01))
              .epsilon(1e-12));
}

TEST_CASE("confidence half-width and its inverse") {
    // c kappa(delta) / (2 sqrt(T))
    CHECK(conf_delta(415, 2.5e-4, CircuitKind::GATES) ==
          doctest::Approx(kappa(2.5e-4) / (2.0 * std::sqrt(415.0))).epsilon(1e-12));
    CHECK(shots_for_conf(0.1, 2.5e-4, CircuitKind::GATES) == 415);
    // T = shots_for_conf is the smallest T with conf_delta <= target
    const std::int64_t T = shots_for_conf(0.07, 0.01, CircuitKind::SWAP);
    CHECK(conf_delta(T, 0.01, CircuitKind::SWAP) <= 0.07);
    CHECK(conf_delta(T - 1, 0.01, CircuitKind::SWAP) > 0.07);
}

TEST_CASE("swap over gates ratio is exactly four for all raw bounds") {
    const auto ratio = [](double swp, double gts) { return swp / gts; };
    CHECK(ratio(n_sg_raw(2, 0.5, CircuitKind::SWAP, 40, 0.01),
                n_sg_raw(2, 0.5, CircuitKind::GATES, 40, 0.01)) == doctest::Approx(4.0));
    CHECK(ratio(n_precise_raw(10, 20, 0.1, CircuitKind::SWAP, 0.01),
                n_precise_raw(10, 20, 0.1, CircuitKind::GATES, 0.01)) ==
          doctest::Approx(4.0));
    CHECK(ratio(n_margin_risk_raw(2, CircuitKind::SWAP, 40, 0.01),
                n_margin_risk_raw(2, CircuitKind::GATES, 40, 0.01)) ==
          doctest::Approx(4.0));
}

TEST_CASE("gamma_star picks the largest margin with no extra error") {
    VectorXd f(4), y(4);
    f << 1.2, 0.8, -0.9, -1.4;
    y << 1.0, 1.0, -1.0, -1.0;
    // zero-margin error is 0; margins are 1.2, 0.8, 0.9, 1.4 so any
    // gamma <= 0.8 keeps it at 0. Grid step 0.01 -> 0.8.
    CHECK(gamma_star(f, y) == doctest::Approx(0.8));
    // with one misclassified point the base error is 1/4 and gamma_star is
    // still limited by the smallest correct margin
    VectorXd y2 = y;
    y2(1) = -1.0; // point 1 now wrong: y f = -0.8
    CHECK(gamma_star(f, y2) == doctest::Approx(0.9));
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(n_sg(2.0, 0.0, CircuitKind::GATES, 40, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(n_sg(2.0, 1.0, CircuitKind::GATES, 0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(n_reliable_point(2.0, 0.0, CircuitKind::GATES, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(n_precise(0, 10, 0.1, CircuitKind::GATES, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(shots_for_conf(0.0, 0.01, CircuitKind::GATES),
                    std::invalid_argument);
}

} // TEST_SUITE
