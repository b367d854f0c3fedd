#pragma once

#include <Eigen/Dense>

#include "qks/conic.hpp"
#include "qks/sampler.hpp"
#include "qks/svm.hpp"

namespace qks {

// Chance-constrained SVM training that is robust to shot noise in the kernel
// values seen at classification time (and, for the -Est programs, to noise
// in the training kernel matrix itself). Each program is a second-order cone
// program dominating the nominal primal objective with high probability.

enum class PenaltyNorm { L2, L1 };

struct RobustParams {
    std::int64_t shots_classify = 256; // N
    double delta1 = 0.01;
    double delta2 = 0.01;
    PenaltyNorm norm = PenaltyNorm::L2;
    CircuitKind kind = CircuitKind::GATES;

    void validate() const;
    // (c / (2 sqrt(N))) * kappa(delta): the sub-Gaussian deviation scale
    double deviation(double delta) const;
};

struct EstParams {
    std::int64_t shots_train = 415; // T
    double delta1p = 0.01;
    double delta2p = 0.01;
    double delta_conf = 0.0; // confidence half-width at level delta1p / m
    double ridge_conf = 0.0; // confidence half-width at level delta2p
};

// Derives the confidence half-widths from (T, delta'_1, delta'_2) for a
// training set of size m.
EstParams make_est_params(std::int64_t shots_train, double delta1p, double delta2p,
                          Eigen::Index m, CircuitKind kind);

// Program over variables (beta, b, xi, t[, r or beta_split]):
//   min  C sum(xi) + t
//   s.t. xi_i >= 0
//        xi_i >= 1 + rho * r - y_i (K*_i. beta + b),  rho = (c/(2 sqrt N)) kappa(delta1/m)
//        r >= ||beta||  (L2 cone, or L1 via nonnegative splitting)
//        (1/2) beta' (K* + (c/(2 sqrt N)) kappa(delta2) I) beta <= t
ConeProgram build_shofar(const Eigen::MatrixXd& K_star, const Eigen::VectorXd& y,
                         double C, const RobustParams& p);

// Same program with an estimated (possibly indefinite) training matrix: the
// hinge penalty gains delta_conf and the ridge gains ridge_conf. Throws if
// the total ridge does not restore positive semidefiniteness.
ConeProgram build_shofar_est(const Eigen::MatrixXd& K_hat, const Eigen::VectorXd& y,
                             double C, const RobustParams& p, const EstParams& e);

// Smallest extra ridge (on top of the sampling ridge (c/(2 sqrt N)) kappa(delta2))
// that makes K_hat PSD with a 1e-9 margin; 0 if none is needed.
double ensure_convexity(const Eigen::MatrixXd& K_hat, const RobustParams& p);

struct RobustTrainResult {
    SvmModel model;
    double objective = 0.0; // optimal value of the robust program
    ConeSolution solution;
    RobustParams params;
    EstParams est; // meaningful only for the -est variants
};

RobustTrainResult train_robust(const Eigen::MatrixXd& K_star, const Eigen::VectorXd& y,
                               double C, const RobustParams& p, double tol = 1e-8);

RobustTrainResult train_robust_est(const Eigen::MatrixXd& K_hat,
                                   const Eigen::VectorXd& y, double C,
                                   const RobustParams& p, const EstParams& e,
                                   double tol = 1e-8);

} // namespace qks
