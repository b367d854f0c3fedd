#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qks/harness.hpp"

namespace qks {

// Run configuration parsed from a `key = value` text file ('#' comments).
// Unknown keys are errors; see parse_config for the full key list.
struct RunConfig {
    // dataset
    std::string dataset = "circles"; // circles | moons | checkerboard | havlicek
    Eigen::Index train_size = 40;
    Eigen::Index eval_size = 0; // 0: evaluate on the training set
    double noise_sd = 0.05;
    double factor = 0.5;     // circles
    Eigen::Index grid = 4;   // checkerboard
    double gap = 0.3;        // havlicek

    // embedding
    std::string embedding = "angle"; // angle | iqp | iqp-angle
    int n_qubits = 2;

    // classifiers / experiment
    std::vector<std::string> variants = {"nominal", "shofar"};
    double C = 1000.0;
    std::vector<std::int64_t> N_grid = {256};
    std::vector<std::int64_t> T_grid;
    std::int64_t T = 415;
    double delta1 = 0.01, delta2 = 0.01, delta1p = 0.01, delta2p = 0.01;
    std::string circuit = "gates";
    int n_trials = 200;
    double delta_threshold = 0.0;
    double depol_lambda = 0.0;
    bool mitigate = false;

    // search parameters (npractical / bounds)
    double gamma = 0.0; // 0: use the largest zero-error margin of the model
    double delta_target = 0.01;

    std::uint64_t master_seed = 1;
    std::string out_dir = ".";

    EmbeddingSpec embedding_spec() const;
    CircuitKind circuit_kind() const;
};

RunConfig parse_config(const std::string& path);

// Generates the train and eval datasets named by the config (eval uses a
// seed derived from the master seed so the sets are disjoint draws).
LabeledDataset make_train_dataset(const RunConfig& cfg);
LabeledDataset make_eval_dataset(const RunConfig& cfg);

SweepConfig make_sweep_config(const RunConfig& cfg);

} // namespace qks
