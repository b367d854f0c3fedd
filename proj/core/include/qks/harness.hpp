#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qks/data.hpp"
#include "qks/robust.hpp"
#include "qks/sampler.hpp"
#include "qks/svm.hpp"

namespace qks {

struct TrialPlan {
    int n_trials = 200;
    std::uint64_t master_seed = 0;
    ShotPlan shot_plan;
};

struct ReliabilityReport {
    Eigen::VectorXd per_point_reliability;
    double dataset_reliability = 0.0;
    double delta_threshold = 0.0;
    double accuracy_mean = 0.0;
    double accuracy_min = 0.0;
    double accuracy_max = 0.0;
    double relative_accuracy = 0.0; // mean stochastic accuracy / reference accuracy
    std::int64_t N = 0;
    std::string variant;
    std::int64_t m_sv = 0;
    std::int64_t total_shots = 0; // m_sv * N
};

// Per-point reliability = fraction of trials whose label agrees with the
// reference; dataset reliability = fraction of points with per-point value
// >= 1 - delta. labels_by_trial is n_trials x M.
ReliabilityReport empirical_reliability(const Eigen::MatrixXd& labels_by_trial,
                                        const Eigen::VectorXd& ref_labels,
                                        double delta = 0.0);

double relative_accuracy(double acc_h, double acc_f);

// Smallest N for which the fraction of trials with
// error0(f^(N)) <= error_gamma(f*) is >= 1 - delta_target, searched by
// doubling from n_start and then bisecting between the last failing and the
// first passing budget. K_star_eval(i, j) = K(train_i, eval_j).
struct NPracticalOptions {
    std::int64_t n_start = 2;
    std::int64_t n_max = std::int64_t(1) << 40;
};

std::int64_t n_practical(const Eigen::MatrixXd& K_star_eval,
                         const Eigen::VectorXd& y_eval, const SvmModel& model,
                         double gamma, double delta_target, const TrialPlan& plan,
                         const NPracticalOptions& opts = {});

// Depolarizing-noise mitigation: estimates the channel weight from the mean
// of the sampled diagonal (exactly 1 - lambda^2 (1 - 1/d) in expectation) and
// inverts the channel; the returned diagonal is set to 1.
Eigen::MatrixXd mitigate_m_mean(const Eigen::MatrixXd& K_hat, Eigen::Index d);

struct SweepConfig {
    LabeledDataset train;
    LabeledDataset eval;
    EmbeddingSpec embedding;
    std::vector<std::string> variants = {"nominal", "shofar"};
    double C = 1000.0;
    std::vector<std::int64_t> N_grid;
    std::int64_t T = 415; // training-kernel shots for the -est variants
    double delta1 = 0.01, delta2 = 0.01;
    double delta1p = 0.01, delta2p = 0.01;
    CircuitKind circuit = CircuitKind::GATES;
    int n_trials = 200;
    std::uint64_t master_seed = 0;
    double delta_threshold = 0.0;
    // Depolarizing channel applied to every kernel evaluation (0 = noiseless)
    double depol_lambda = 0.0;
    bool mitigate = false; // apply M-MEAN to the training matrix estimate
};

// For each (variant, N): trains as specified, evaluates n_trials stochastic
// classifiers against the variant's exact-kernel reference labels, reports
// accuracy statistics against the true labels. Kernel-draw instantiations are
// shared across variants (seeds depend only on (master_seed, N, trial)).
std::vector<ReliabilityReport> run_reliability_sweep(const SweepConfig& cfg);

void save_reports_csv(const std::vector<ReliabilityReport>& reports,
                      const std::string& path);

// Depolarizing-noise study: nominal classifiers on the spectrally shifted
// T-shot estimate (with and without M-MEAN mitigation) and robust-est
// classifiers on the raw estimates, all evaluated under the same noisy shot
// model. Uses cfg.depol_lambda, cfg.T and cfg.N_grid.
std::vector<ReliabilityReport> run_noise_study(const SweepConfig& cfg);

struct TrainingShotsRow {
    std::int64_t T = 0;
    double ekc_accuracy = 0.0;
    std::vector<ReliabilityReport> per_N;
};

// Trains a nominal SVM on the shifted T-shot training-kernel estimate for
// each T and reports exact-kernel accuracy plus reliability-vs-N curves.
std::vector<TrainingShotsRow> run_training_shots_study(
    const SweepConfig& cfg, const std::vector<std::int64_t>& T_grid);

} // namespace qks
