#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "qks/config.hpp"

using namespace qks;

namespace {

std::string write_tmp(const std::string& body) {
    const std::string path = "/tmp/qks_test_config.cfg";
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults survive an empty file") {
    const std::string path = write_tmp("# nothing but a comment\n\n");
    const RunConfig cfg = parse_config(path);
    CHECK(cfg.dataset == "circles");
    CHECK(cfg.train_size == 40);
    CHECK(cfg.C == 1000.0);
    CHECK(cfg.T == 415);
    CHECK(cfg.n_trials == 200);
    CHECK(cfg.circuit_kind() == CircuitKind::GATES);
    CHECK(cfg.embedding_spec().kind == EmbeddingKind::Angle);
    REQUIRE(cfg.variants.size() == 2);
    CHECK(cfg.variants[0] == "nominal");
    std::remove(path.c_str());
}

TEST_CASE("keys are parsed and lists split on commas") {
    const std::string path = write_tmp(
        "dataset = moons\n"
        "train_size = 24\n"
        "eval_size = 60\n"
        "variants = nominal, shofar, l1-shofar\n"
        "N_grid = 16, 64, 256\n"
        "T_grid = 64,415\n"
        "circuit = swap\n"
        "embedding = iqp\n"
        "n_qubits = 2\n"
        "depol_lambda = 0.05\n"
        "mitigate = true\n"
        "master_seed = 9\n"
        "gamma = 0.4\n");
    const RunConfig cfg = parse_config(path);
    CHECK(cfg.dataset == "moons");
    CHECK(cfg.train_size == 24);
    CHECK(cfg.eval_size == 60);
    REQUIRE(cfg.variants.size() == 3);
    CHECK(cfg.variants[2] == "l1-shofar");
    REQUIRE(cfg.N_grid.size() == 3);
    CHECK(cfg.N_grid[1] == 64);
    REQUIRE(cfg.T_grid.size() == 2);
    CHECK(cfg.T_grid[1] == 415);
    CHECK(cfg.circuit_kind() == CircuitKind::SWAP);
    CHECK(cfg.embedding_spec().kind == EmbeddingKind::IQP);
    CHECK(cfg.depol_lambda == 0.05);
    CHECK(cfg.mitigate);
    CHECK(cfg.master_seed == 9);
    CHECK(cfg.gamma == 0.4);
    std::remove(path.c_str());
}

TEST_CASE("errors are aggregated with the offending keys") {
    const std::string path = write_tmp(
        "datset = circles\n"   // typo
        "train_size = -4\n"    // bad value
        "train_size = 8\n");   // duplicate
    std::string msg;
    try {
        parse_config(path);
    } catch (const std::exception& e) {
        msg = e.what();
    }
    REQUIRE_FALSE(msg.empty());
    CHECK(msg.find("datset") != std::string::npos);
    CHECK(msg.find("train_size") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("dataset factories honor the config") {
    RunConfig cfg;
    cfg.dataset = "checkerboard";
    cfg.train_size = 32;
    cfg.eval_size = 48;
    cfg.grid = 4;
    cfg.master_seed = 3;
    const LabeledDataset train = make_train_dataset(cfg);
    const LabeledDataset eval = make_eval_dataset(cfg);
    CHECK(train.size() == 32);
    CHECK(eval.size() == 48);
    CHECK(train.name == "checkerboard");
    // eval must be a different draw than train
    CHECK(train.X(0, 0) != eval.X(0, 0));
    // eval_size = 0 evaluates on the training set itself
    cfg.eval_size = 0;
    const LabeledDataset same = make_eval_dataset(cfg);
    CHECK((same.X - train.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sweep config carries the experiment fields over") {
    RunConfig cfg;
    cfg.dataset = "circles";
    cfg.train_size = 12;
    cfg.N_grid = {8, 32};
    cfg.variants = {"shofar"};
    cfg.n_trials = 7;
    cfg.delta_threshold = 0.02;
    cfg.circuit = "swap";
    const SweepConfig sw = make_sweep_config(cfg);
    CHECK(sw.train.size() == 12);
    CHECK(sw.N_grid == cfg.N_grid);
    CHECK(sw.variants == cfg.variants);
    CHECK(sw.n_trials == 7);
    CHECK(sw.delta_threshold == 0.02);
    CHECK(sw.circuit == CircuitKind::SWAP);
}

TEST_CASE("missing file is an error") {
    CHECK_THROWS_AS(parse_config("/tmp/qks_no_such_file.cfg"),
                    std::runtime_error);
}

} // TEST_SUITE
