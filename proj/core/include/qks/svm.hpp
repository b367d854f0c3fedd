#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qks/conic.hpp"

namespace qks {

// Kernel SVM trained in the primal via an epigraph cone program:
//
//   min  C * sum(xi) + t
//   s.t. xi_i >= 0
//        xi_i >= 1 - y_i (sum_j beta_j K_ij + b)
//        (1/2) beta' K beta <= t
//
// over variables [beta(m), b, xi(m), t].

struct SvmModel {
    Eigen::VectorXd beta;    // one coefficient per training point
    double bias = 0.0;
    Eigen::MatrixXd X_train; // rows are training inputs
    std::string variant;     // how the model was trained ("svm", "shofar", ...)
    std::string embedding;   // embedding id used for the kernel

    std::vector<Eigen::Index> support_indices(double rel_tol = 1e-6) const;
    Eigen::Index n_support(double rel_tol = 1e-6) const;
    double beta_norm1() const { return beta.lpNorm<1>(); }
    double beta_norm2() const { return beta.norm(); }
};

// Trains on a precomputed kernel matrix K (m x m) with labels y in {-1,+1}.
SvmModel solve_primal(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                      double C, double tol = 1e-8);

// Decision values f(x) = sum_j beta_j K(x_j, x) + b for a kernel block
// K_eval with K_eval(i, j) = K(x_train_i, x_eval_j).
Eigen::VectorXd decision_values(const SvmModel& model, const Eigen::MatrixXd& K_eval);

// sign with sgn(0) = +1
Eigen::VectorXd classify(const SvmModel& model, const Eigen::MatrixXd& K_eval);

double accuracy(const Eigen::VectorXd& predicted, const Eigen::VectorXd& y);

// Fraction of points with y_i f(x_i) < gamma (strict); gamma = 0 gives the
// ordinary misclassification rate under sgn(0) = +1.
double gamma_margin_error(const Eigen::VectorXd& decision, const Eigen::VectorXd& y,
                          double gamma);

void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(const std::string& path);

} // namespace qks
