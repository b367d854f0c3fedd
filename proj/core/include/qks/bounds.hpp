#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qks/sampler.hpp"

namespace qks {

// Shot-budget bounds for reliable kernel classification under estimator
// noise that is sub-Gaussian with parameter c / (2 sqrt(N)).
//
// Each bound comes in a raw (real-valued) flavor for plotting smooth curves
// and a ceilinged integer flavor for actual budgets. Natural logs throughout.

double kappa(double delta); // sqrt(2 ln(1/delta)), delta in (0, 1]

double n_reliable_point_raw(double beta_norm2, double gamma_x, CircuitKind circuit,
                            double delta);
std::int64_t n_reliable_point(double beta_norm2, double gamma_x, CircuitKind circuit,
                              double delta);

double n_sg_raw(double beta_norm2, double gamma, CircuitKind circuit, std::int64_t M,
                double delta);
std::int64_t n_sg(double beta_norm2, double gamma, CircuitKind circuit, std::int64_t M,
                  double delta);

double n_sg_worstcase_raw(std::int64_t m_sv, double C, double gamma,
                          CircuitKind circuit, std::int64_t M, double delta);
std::int64_t n_sg_worstcase(std::int64_t m_sv, double C, double gamma,
                            CircuitKind circuit, std::int64_t M, double delta);

double n_margin_risk_raw(double beta_norm2, CircuitKind circuit, std::int64_t m,
                         double delta);
std::int64_t n_margin_risk(double beta_norm2, CircuitKind circuit, std::int64_t m,
                           double delta);

double n_precise_raw(std::int64_t m_sv, std::int64_t M, double epsilon,
                     CircuitKind circuit, double delta);
std::int64_t n_precise(std::int64_t m_sv, std::int64_t M, double epsilon,
                       CircuitKind circuit, double delta);

// Half-width of the per-entry confidence interval after T shots, and the
// smallest T achieving a requested half-width.
double conf_delta(std::int64_t T, double delta, CircuitKind circuit);
std::int64_t shots_for_conf(double delta_conf, double delta, CircuitKind circuit);

// Largest gamma on a uniform grid over [lo, hi] whose gamma-margin error on
// the given decision values equals the plain error rate (gamma = 0 case).
double gamma_star(const Eigen::VectorXd& decision, const Eigen::VectorXd& y,
                  double lo = 0.0, double hi = 2.0, double step = 0.01);

} // namespace qks
