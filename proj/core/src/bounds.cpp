#include "qks/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "qks/svm.hpp"

namespace qks {

namespace {

std::int64_t ceil_to_int(double v) {
    if (!(v >= 0.0) || v > 9.0e18)
        throw std::invalid_argument("shot bound out of integer range");
    return static_cast<std::int64_t>(std::ceil(v));
}

double c2(CircuitKind circuit) {
    const double c = circuit_factor(circuit);
    return c * c;
}

} // namespace

double kappa(double delta) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("kappa: delta must lie in (0, 1]");
    return std::sqrt(2.0 * std::log(1.0 / delta));
}

double n_reliable_point_raw(double beta_norm2, double gamma_x, CircuitKind circuit,
                            double delta) {
    if (gamma_x == 0.0)
        throw std::invalid_argument("n_reliable_point: margin is zero at this point");
    if (!(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("n_reliable_point: delta must lie in (0, 1)");
    const double r = circuit_factor(circuit) * beta_norm2 / std::abs(gamma_x);
    return 0.5 * r * r * std::log(1.0 / delta);
}

std::int64_t n_reliable_point(double beta_norm2, double gamma_x, CircuitKind circuit,
                              double delta) {
    return ceil_to_int(n_reliable_point_raw(beta_norm2, gamma_x, circuit, delta));
}

double n_sg_raw(double beta_norm2, double gamma, CircuitKind circuit, std::int64_t M,
                double delta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("n_sg: gamma must be positive");
    if (M < 1) throw std::invalid_argument("n_sg: M must be >= 1");
    if (!(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("n_sg: delta must lie in (0, 1)");
    return c2(circuit) / (2.0 * gamma * gamma) * beta_norm2 * beta_norm2 *
           std::log(static_cast<double>(M) / delta);
}

std::int64_t n_sg(double beta_norm2, double gamma, CircuitKind circuit, std::int64_t M,
                  double delta) {
    return ceil_to_int(n_sg_raw(beta_norm2, gamma, circuit, M, delta));
}

double n_sg_worstcase_raw(std::int64_t m_sv, double C, double gamma,
                          CircuitKind circuit, std::int64_t M, double delta) {
    if (m_sv < 0) throw std::invalid_argument("n_sg_worstcase: m_sv must be >= 0");
    if (!(C > 0.0)) throw std::invalid_argument("n_sg_worstcase: C must be positive");
    if (!(gamma > 0.0))
        throw std::invalid_argument("n_sg_worstcase: gamma must be positive");
    if (M < 1) throw std::invalid_argument("n_sg_worstcase: M must be >= 1");
    if (!(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("n_sg_worstcase: delta must lie in (0, 1)");
    return c2(circuit) / (2.0 * gamma * gamma) * static_cast<double>(m_sv) * C * C *
           std::log(static_cast<double>(M) / delta);
}

std::int64_t n_sg_worstcase(std::int64_t m_sv, double C, double gamma,
                            CircuitKind circuit, std::int64_t M, double delta) {
    return ceil_to_int(n_sg_worstcase_raw(m_sv, C, gamma, circuit, M, delta));
}

double n_margin_risk_raw(double beta_norm2, CircuitKind circuit, std::int64_t m,
                         double delta) {
    return n_sg_raw(beta_norm2, 1.0, circuit, m, delta);
}

std::int64_t n_margin_risk(double beta_norm2, CircuitKind circuit, std::int64_t m,
                           double delta) {
    return ceil_to_int(n_margin_risk_raw(beta_norm2, circuit, m, delta));
}

double n_precise_raw(std::int64_t m_sv, std::int64_t M, double epsilon,
                     CircuitKind circuit, double delta) {
    if (m_sv < 1) throw std::invalid_argument("n_precise: m_sv must be >= 1");
    if (M < 1) throw std::invalid_argument("n_precise: M must be >= 1");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("n_precise: epsilon must be positive");
    if (!(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("n_precise: delta must lie in (0, 1)");
    const double mM = static_cast<double>(m_sv) * static_cast<double>(M);
    return c2(circuit) / (2.0 * epsilon * epsilon) * mM * std::log(mM / delta);
}

std::int64_t n_precise(std::int64_t m_sv, std::int64_t M, double epsilon,
                       CircuitKind circuit, double delta) {
    return ceil_to_int(n_precise_raw(m_sv, M, epsilon, circuit, delta));
}

double conf_delta(std::int64_t T, double delta, CircuitKind circuit) {
    if (T < 1) throw std::invalid_argument("conf_delta: T must be >= 1");
    return circuit_factor(circuit) * kappa(delta) /
           (2.0 * std::sqrt(static_cast<double>(T)));
}

std::int64_t shots_for_conf(double delta_conf, double delta, CircuitKind circuit) {
    if (!(delta_conf > 0.0))
        throw std::invalid_argument("shots_for_conf: delta_conf must be positive");
    const double r = circuit_factor(circuit) * kappa(delta) / (2.0 * delta_conf);
    return ceil_to_int(r * r);
}

double gamma_star(const Eigen::VectorXd& decision, const Eigen::VectorXd& y,
                  double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo)
        throw std::invalid_argument("gamma_star: bad grid");
    const double err0 = gamma_margin_error(decision, y, 0.0);
    const auto n_steps = static_cast<long>(std::floor((hi - lo) / step + 1e-12));
    for (long i = n_steps; i >= 0; --i) {
        const double g = lo + step * static_cast<double>(i);
        if (gamma_margin_error(decision, y, g) == err0) return g;
    }
    return lo;
}

} // namespace qks
