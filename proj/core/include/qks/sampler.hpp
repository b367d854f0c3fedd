#pragma once

#include "qks/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace qks {

enum class CircuitKind { GATES, SWAP };

std::string to_string(CircuitKind k);
CircuitKind circuit_kind_from_string(const std::string& s);

// c = 1 for GATES, 2 for SWAP.
double circuit_factor(CircuitKind kind);

// Subgaussian scale of the N-shot kernel estimate: sigma0 = c / (2 sqrt(N)).
double sigma0(CircuitKind kind, int64_t shots);

struct ShotPlan {
    CircuitKind kind = CircuitKind::GATES;
    int64_t shots = 1;
};

// sigma0^2 plus any extra unbiased-noise variance; the total variance proxy
// feeding the bounds and robust programs.
struct UncertaintyModel {
    CircuitKind kind = CircuitKind::GATES;
    int64_t shots = 1;
    double extra_variance = 0.0;

    double sigma0() const { return qks::sigma0(kind, shots); }
    double variance_proxy() const {
        const double s = sigma0();
        return s * s + extra_variance;
    }
};

// One shot-noise kernel estimate.
//   GATES: Bin(N, k*) / N                     in [0, 1]
//   SWAP:  2 Bin(N, (1 + k*)/2) / N - 1       in [-1, 1]
// Both are unbiased for k*.
double draw_kernel(double k_star, const ShotPlan& plan, SplitMix64& rng);

// Shot-sampled kernel matrix with provenance; entries quantized to the
// binomial lattice of the originating circuit.
struct EstimatedKernelMatrix {
    Eigen::MatrixXd entries;
    ShotPlan provenance;
    uint64_t seed = 0;
    bool same_set = false;      // square matrix over one point set
    bool sampled_diagonal = false;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

// Cross-set matrix: independent draws per entry, counter-seeded from
// (seed, row, col) so filling order does not matter.
EstimatedKernelMatrix draw_kernel_matrix(const Eigen::MatrixXd& K_star,
                                         const ShotPlan& plan, uint64_t seed);

// Same-set square matrix: upper triangle drawn and mirrored. The diagonal is
// fixed to 1 unless sample_diagonal is set (needed when the exact diagonal
// is below 1, e.g. under a depolarizing channel).
EstimatedKernelMatrix draw_kernel_matrix_sym(const Eigen::MatrixXd& K_star,
                                             const ShotPlan& plan, uint64_t seed,
                                             bool sample_diagonal = false);

// Var(K^(N)): GATES k(1-k)/N, SWAP (1-k^2)/N.
double estimator_variance(CircuitKind kind, double k_star, int64_t shots);

// Optimal variance proxy of a centered Bernoulli(p).
double bernoulli_variance_proxy(double p);

// CSV rows "row,col,value" and a compact binary cache.
void save_csv(const EstimatedKernelMatrix& m, const std::string& path);
void save_binary(const EstimatedKernelMatrix& m, const std::string& path);
EstimatedKernelMatrix load_binary(const std::string& path);

} // namespace qks
