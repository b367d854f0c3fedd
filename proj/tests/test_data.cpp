#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qks/data.hpp"

using namespace qks;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void check_common(const LabeledDataset& ds, Eigen::Index m) {
    REQUIRE(ds.size() == m);
    REQUIRE(ds.dim() == 2);
    ds.validate();
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        REQUIRE((ds.y(i) == 1.0 || ds.y(i) == -1.0));
        if (ds.y(i) > 0) ++pos;
    }
    CHECK(std::abs(2 * pos - m) <= 1); // balanced classes
    CHECK(ds.X.minCoeff() >= 0.0);
}

} // namespace

TEST_SUITE("data") {

TEST_CASE("circles geometry and scaling") {
    const LabeledDataset ds = gen_circles(40, 0.0, 0.5, 1);
    check_common(ds, 40);
    CHECK(ds.X.maxCoeff() <= M_PI + 1e-12);
    // with zero jitter the min-max rescale maps the outer circle to touch
    // the box and keeps the inner circle strictly inside
    CHECK(ds.X.maxCoeff() == doctest::Approx(M_PI));
    // inner points (label +1) are closer to the box center than outer ones
    const Eigen::RowVector2d c(M_PI / 2.0, M_PI / 2.0);
    double inner_max = 0.0, outer_min = 1e9;
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        const double r = (ds.X.row(i) - c).norm();
        if (ds.y(i) > 0)
            inner_max = std::max(inner_max, r);
        else
            outer_min = std::min(outer_min, r);
    }
    CHECK(inner_max < outer_min);
    CHECK(inner_max == doctest::Approx(0.5 * outer_min).epsilon(1e-9));
}

TEST_CASE("generators are deterministic in the seed") {
    const auto a = gen_circles(20, 0.05, 0.5, 7);
    const auto b = gen_circles(20, 0.05, 0.5, 7);
    const auto c = gen_circles(20, 0.05, 0.5, 8);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.X - c.X).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("moons") {
    const LabeledDataset ds = gen_moons(30, 0.05, 3);
    check_common(ds, 30);
    CHECK(ds.name == "moons");
}

TEST_CASE("checkerboard cells carry parity labels") {
    const LabeledDataset ds = gen_checkerboard(64, 4, 5);
    check_common(ds, 64);
    const double cell = M_PI / 4.0;
    for (Eigen::Index k = 0; k < ds.size(); ++k) {
        const int i = static_cast<int>(ds.X(k, 0) / cell);
        const int j = static_cast<int>(ds.X(k, 1) / cell);
        const double expect = ((i + j) % 2 == 0) ? 1.0 : -1.0;
        CHECK(ds.y(k) == expect);
    }
}

TEST_CASE("unitary-labeled dataset clears the decision gap") {
    EmbeddingSpec spec;
    spec.kind = EmbeddingKind::IQP;
    spec.n_qubits = 2;
    const LabeledDataset ds = gen_havlicek(20, 0.3, 11, spec);
    check_common(ds, 20);
    // labels are reproducible and the generator is deterministic
    const LabeledDataset ds2 = gen_havlicek(20, 0.3, 11, spec);
    CHECK((ds.X - ds2.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ds.y - ds2.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ds.X.maxCoeff() <= 2.0 * M_PI);
}

TEST_CASE("odd or invalid sizes are rejected") {
    CHECK_THROWS_AS(gen_circles(7, 0.05, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_moons(1, 0.05, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_checkerboard(10, 0, 1), std::invalid_argument);
    EmbeddingSpec spec;
    CHECK_THROWS_AS(gen_havlicek(3, 0.3, 1, spec), std::invalid_argument);
}

TEST_CASE("csv round trip is lossless") {
    const LabeledDataset ds = gen_moons(16, 0.05, 9);
    const std::string path = "/tmp/qks_test_data.csv";
    save_csv(ds, path);
    const LabeledDataset r = load_csv(path);
    CHECK((ds.X - r.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ds.y - r.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.name == ds.name);
    CHECK(r.seed == ds.seed);
    std::remove(path.c_str());
    std::remove((path + ".meta").c_str());
}

TEST_CASE("csv loader reports malformed rows") {
    const std::string path = "/tmp/qks_test_bad.csv";
    {
        std::ofstream out(path);
        out << "x1,x2,label\n0.1,0.2,1\n0.3,oops,-1\n";
    }
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
    {
        std::ofstream out(path);
        out << "x1,x2,label\n0.1,0.2,2\n";
    }
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
    std::remove(path.c_str());
}

} // TEST_SUITE
