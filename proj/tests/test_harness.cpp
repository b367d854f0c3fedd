#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qks/bounds.hpp"
#include "qks/harness.hpp"
#include "qks/qkernel.hpp"

using namespace qks;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("harness") {

TEST_CASE("empirical reliability counts trial agreement") {
    MatrixXd labels(4, 3); // 4 trials, 3 points
    labels << 1, 1, -1,
              1, -1, -1,
              1, 1, -1,
              1, 1, 1;
    VectorXd ref(3);
    ref << 1, 1, -1;
    const auto rep = empirical_reliability(labels, ref, 0.3);
    CHECK(rep.per_point_reliability(0) == doctest::Approx(1.0));
    CHECK(rep.per_point_reliability(1) == doctest::Approx(0.75));
    CHECK(rep.per_point_reliability(2) == doctest::Approx(0.75));
    // threshold 1 - 0.3 = 0.7: all three points qualify
    CHECK(rep.dataset_reliability == doctest::Approx(1.0));
    const auto strict = empirical_reliability(labels, ref, 0.0);
    CHECK(strict.dataset_reliability == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("relative accuracy") {
    CHECK(relative_accuracy(0.9, 1.0) == doctest::Approx(0.9));
    CHECK(relative_accuracy(0.5, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(relative_accuracy(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("mitigation inverts the depolarizing channel") {
    const LabeledDataset ds = gen_circles(10, 0.05, 0.5, 2);
    const MatrixXd K = kernel_matrix_exact(EmbeddingSpec{}, ds.X);
    const DepolarizingChannel ch(0.2, 4);
    MatrixXd K_noisy = K;
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index j = 0; j < K.cols(); ++j)
            K_noisy(i, j) = ch.apply(K(i, j));
    const MatrixXd K_rec = mitigate_m_mean(K_noisy, 4);
    CHECK((K_rec - K).cwiseAbs().maxCoeff() < 1e-9);
    // a diagonal already at 1 implies lambda = 0 and mitigation is a no-op
    const MatrixXd same = mitigate_m_mean(K, 4);
    CHECK((same - K).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("practical budget tracks the theoretical ordering") {
    const LabeledDataset ds = gen_circles(20, 0.05, 0.5, 13);
    const MatrixXd K = kernel_matrix_exact(EmbeddingSpec{}, ds.X);
    const SvmModel m = solve_primal(K, ds.y, 1000.0);
    const double gamma = gamma_star(decision_values(m, K), ds.y);
    REQUIRE(gamma > 0.0);

    TrialPlan plan;
    plan.n_trials = 100;
    plan.master_seed = 40;
    plan.shot_plan = ShotPlan{CircuitKind::GATES, 1};
    const std::int64_t n_prac = n_practical(K, ds.y, m, gamma, 0.01, plan);
    const std::int64_t n_theo =
        n_sg(m.beta_norm2(), gamma, CircuitKind::GATES, ds.size(), 0.01);
    CHECK(n_prac >= 1);
    CHECK(n_prac <= n_theo);
    // deterministic in the master seed
    CHECK(n_practical(K, ds.y, m, gamma, 0.01, plan) == n_prac);
    // minimality: halving the budget must fail the acceptance test at the
    // same trials/seed (guaranteed by the bisection postcondition)
    NPracticalOptions opts;
    opts.n_start = n_prac; // search degenerates to verifying n_prac passes
    CHECK(n_practical(K, ds.y, m, gamma, 0.01, plan, opts) == n_prac);
}

TEST_CASE("reliability sweep is deterministic and shares draws across variants") {
    SweepConfig cfg;
    cfg.train = gen_circles(12, 0.05, 0.5, 21);
    cfg.eval = cfg.train;
    cfg.embedding.kind = EmbeddingKind::Angle;
    cfg.variants = {"nominal", "shofar"};
    cfg.N_grid = {16, 256};
    cfg.n_trials = 20;
    cfg.master_seed = 77;

    const auto a = run_reliability_sweep(cfg);
    const auto b = run_reliability_sweep(cfg);
    REQUIRE(a.size() == 4); // 2 variants x 2 budgets
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].variant == b[i].variant);
        CHECK(a[i].N == b[i].N);
        CHECK(a[i].dataset_reliability == b[i].dataset_reliability);
        CHECK(a[i].accuracy_mean == b[i].accuracy_mean);
        CHECK(a[i].total_shots == a[i].m_sv * a[i].N);
        CHECK(a[i].relative_accuracy > 0.0);
    }
    // more shots never hurts dataset reliability on this easy problem
    for (const std::string& v : {"nominal", "shofar"}) {
        double r16 = -1, r256 = -1;
        for (const auto& rep : a) {
            if (rep.variant == v && rep.N == 16) r16 = rep.dataset_reliability;
            if (rep.variant == v && rep.N == 256) r256 = rep.dataset_reliability;
        }
        CHECK(r256 >= r16);
    }
}

TEST_CASE("sweep csv output") {
    SweepConfig cfg;
    cfg.train = gen_circles(8, 0.05, 0.5, 31);
    cfg.eval = cfg.train;
    cfg.embedding.kind = EmbeddingKind::Angle;
    cfg.variants = {"nominal"};
    cfg.N_grid = {64};
    cfg.n_trials = 5;
    const auto reports = run_reliability_sweep(cfg);
    const std::string path = "/tmp/qks_test_sweep.csv";
    save_reports_csv(reports, path);
    std::ifstream f(path);
    std::string header, row, extra;
    REQUIRE(std::getline(f, header));
    CHECK(header ==
          "variant,N,reliability,acc_mean,acc_min,acc_max,RA,m_sv,total_shots");
    REQUIRE(std::getline(f, row));
    CHECK(row.substr(0, 8) == "nominal,");
    CHECK_FALSE(std::getline(f, extra));
    std::remove(path.c_str());
}

TEST_CASE("noise study keeps variants comparable") {
    SweepConfig cfg;
    cfg.train = gen_circles(12, 0.05, 0.5, 41);
    cfg.eval = cfg.train;
    cfg.embedding.kind = EmbeddingKind::Angle;
    cfg.N_grid = {256};
    cfg.n_trials = 10;
    cfg.depol_lambda = 0.05;
    cfg.master_seed = 5;
    const auto reports = run_noise_study(cfg);
    REQUIRE(reports.size() == 4);
    std::vector<std::string> want = {"u-nominal", "m-nominal", "u-robust-est",
                                     "m-robust-est"};
    for (const auto& name : want) {
        bool found = false;
        for (const auto& r : reports)
            if (r.variant == name) found = true;
        CHECK_MESSAGE(found, name);
    }
}

TEST_CASE("training-shots study improves with budget") {
    SweepConfig cfg;
    cfg.train = gen_circles(12, 0.05, 0.5, 51);
    cfg.eval = cfg.train;
    cfg.embedding.kind = EmbeddingKind::Angle;
    cfg.N_grid = {256};
    cfg.n_trials = 5;
    const auto rows = run_training_shots_study(cfg, {16, 4096});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].T == 16);
    CHECK(rows[1].T == 4096);
    CHECK(rows[1].ekc_accuracy >= rows[0].ekc_accuracy);
    REQUIRE(rows[0].per_N.size() == 1);
    CHECK(rows[0].per_N[0].variant == "T16");
}

} // TEST_SUITE
