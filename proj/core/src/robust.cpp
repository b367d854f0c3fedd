#include "qks/robust.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qks/bounds.hpp"

namespace qks {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void RobustParams::validate() const {
    if (shots_classify < 1)
        throw std::invalid_argument("RobustParams: shots_classify must be >= 1");
    if (!(delta1 > 0.0 && delta1 < 1.0) || !(delta2 > 0.0 && delta2 < 1.0))
        throw std::invalid_argument("RobustParams: deltas must lie in (0, 1)");
    if (delta1 + delta2 >= 1.0)
        throw std::invalid_argument("RobustParams: delta1 + delta2 must be < 1");
}

double RobustParams::deviation(double delta) const {
    return circuit_factor(kind) /
           (2.0 * std::sqrt(static_cast<double>(shots_classify))) * kappa(delta);
}

EstParams make_est_params(std::int64_t shots_train, double delta1p, double delta2p,
                          Eigen::Index m, CircuitKind kind) {
    if (shots_train < 1)
        throw std::invalid_argument("make_est_params: shots_train must be >= 1");
    if (m < 1) throw std::invalid_argument("make_est_params: m must be >= 1");
    EstParams e;
    e.shots_train = shots_train;
    e.delta1p = delta1p;
    e.delta2p = delta2p;
    e.delta_conf = conf_delta(shots_train, delta1p / static_cast<double>(m), kind);
    e.ridge_conf = conf_delta(shots_train, delta2p, kind);
    return e;
}

namespace {

void check_problem(const MatrixXd& K, const VectorXd& y, double C) {
    const Eigen::Index m = K.rows();
    if (K.cols() != m) throw std::invalid_argument("kernel matrix must be square");
    if (y.size() != m) throw std::invalid_argument("label count mismatch");
    if (C <= 0.0) throw std::invalid_argument("C must be positive");
    for (Eigen::Index i = 0; i < m; ++i)
        if (y(i) != 1.0 && y(i) != -1.0)
            throw std::invalid_argument("labels must be -1 or +1");
}

// Shared program assembly; `penalty` multiplies the norm surrogate r in the
// hinge rows and `ridge` is added to the quadratic matrix.
ConeProgram build_program(const MatrixXd& K, const VectorXd& y, double C,
                          PenaltyNorm norm, double penalty, double ridge) {
    const Eigen::Index m = K.rows();
    const MatrixXd Q = K + ridge * MatrixXd::Identity(m, m);
    std::vector<int> beta_idx(m);
    for (Eigen::Index i = 0; i < m; ++i) beta_idx[i] = static_cast<int>(i);

    ConeProgram p;
    if (norm == PenaltyNorm::L2) {
        // variables [beta(m), b, xi(m), t, r]
        const Eigen::Index n = 2 * m + 3;
        const Eigen::Index ib = m, ixi = m + 1, it = 2 * m + 1, ir = 2 * m + 2;
        p.n_vars = n;
        p.objective = VectorXd::Zero(n);
        p.objective.segment(ixi, m).setConstant(C);
        p.objective(it) = 1.0;

        MatrixXd A = MatrixXd::Zero(m, n);
        A.block(0, ixi, m, m).setIdentity();
        p.add_nonneg(A, VectorXd::Zero(m));

        // y_i (K_i. beta + b) + xi_i - penalty * r - 1 >= 0
        A.setZero();
        A.block(0, 0, m, m) = y.asDiagonal() * K;
        A.col(ib) = y;
        A.block(0, ixi, m, m).setIdentity();
        A.col(ir).setConstant(-penalty);
        p.add_nonneg(A, VectorXd::Constant(m, -1.0));

        // r >= ||beta||_2
        MatrixXd S = MatrixXd::Zero(m + 1, n);
        S(0, ir) = 1.0;
        S.block(1, 0, m, m).setIdentity();
        p.add_soc(S, VectorXd::Zero(m + 1));

        p.blocks.push_back(quad_epigraph(Q, beta_idx, static_cast<int>(it),
                                         static_cast<int>(n)));
    } else {
        // variables [beta(m), b, xi(m), t, beta+(m), beta-(m)]; the norm
        // surrogate sum(beta+ + beta-) is substituted into the hinge rows.
        const Eigen::Index n = 4 * m + 2;
        const Eigen::Index ib = m, ixi = m + 1, it = 2 * m + 1;
        const Eigen::Index ip = 2 * m + 2, in = 3 * m + 2;
        p.n_vars = n;
        p.objective = VectorXd::Zero(n);
        p.objective.segment(ixi, m).setConstant(C);
        p.objective(it) = 1.0;

        // beta = beta+ - beta-
        MatrixXd E = MatrixXd::Zero(m, n);
        E.block(0, 0, m, m).setIdentity();
        E.block(0, ip, m, m) = -MatrixXd::Identity(m, m);
        E.block(0, in, m, m).setIdentity();
        p.add_zero(E, VectorXd::Zero(m));

        MatrixXd A = MatrixXd::Zero(2 * m, n);
        A.block(0, ip, 2 * m, 2 * m).setIdentity();
        p.add_nonneg(A, VectorXd::Zero(2 * m));

        A = MatrixXd::Zero(m, n);
        A.block(0, ixi, m, m).setIdentity();
        p.add_nonneg(A, VectorXd::Zero(m));

        A.setZero();
        A.block(0, 0, m, m) = y.asDiagonal() * K;
        A.col(ib) = y;
        A.block(0, ixi, m, m).setIdentity();
        A.block(0, ip, m, 2 * m).setConstant(-penalty);
        p.add_nonneg(A, VectorXd::Constant(m, -1.0));

        p.blocks.push_back(quad_epigraph(Q, beta_idx, static_cast<int>(it),
                                         static_cast<int>(n)));
    }
    return p;
}

} // namespace

ConeProgram build_shofar(const MatrixXd& K_star, const VectorXd& y, double C,
                         const RobustParams& p) {
    p.validate();
    check_problem(K_star, y, C);
    if (min_eig(K_star) < -1e-9)
        throw std::invalid_argument("build_shofar: kernel matrix is not PSD");

    const auto m = static_cast<double>(K_star.rows());
    const double penalty = p.deviation(p.delta1 / m);
    const double ridge = p.deviation(p.delta2);
    return build_program(K_star, y, C, p.norm, penalty, ridge);
}

ConeProgram build_shofar_est(const MatrixXd& K_hat, const VectorXd& y, double C,
                             const RobustParams& p, const EstParams& e) {
    p.validate();
    check_problem(K_hat, y, C);

    const auto m = static_cast<double>(K_hat.rows());
    const double penalty = p.deviation(p.delta1 / m) + e.delta_conf;
    const double ridge = p.deviation(p.delta2) + e.ridge_conf;
    const double lam_min = min_eig(K_hat);
    if (lam_min + ridge < -1e-9) {
        std::ostringstream msg;
        msg << "build_shofar_est: total ridge " << ridge
            << " does not restore convexity; need at least " << -lam_min;
        throw std::invalid_argument(msg.str());
    }
    return build_program(K_hat, y, C, p.norm, penalty, ridge);
}

double ensure_convexity(const MatrixXd& K_hat, const RobustParams& p) {
    p.validate();
    const double sampling_ridge = p.deviation(p.delta2);
    const double lam_min = min_eig(K_hat);
    const double need = -lam_min - sampling_ridge;
    return need > 0.0 ? need + 1e-9 : 0.0;
}

namespace {

RobustTrainResult finish(ConeProgram&& prog, const MatrixXd& K,
                         const RobustParams& p, const EstParams& e,
                         const char* variant, double tol) {
    ConeSolution sol = solve(prog, tol);
    if (sol.status != SolveStatus::Optimal)
        throw std::runtime_error(std::string(variant) +
                                 ": cone solver did not reach optimality");
    RobustTrainResult r;
    r.model.beta = sol.x.head(K.rows());
    r.model.bias = sol.x(K.rows());
    r.model.variant = variant;
    r.objective = sol.objective_value;
    r.solution = std::move(sol);
    r.params = p;
    r.est = e;
    return r;
}

} // namespace

RobustTrainResult train_robust(const MatrixXd& K_star, const VectorXd& y, double C,
                               const RobustParams& p, double tol) {
    ConeProgram prog = build_shofar(K_star, y, C, p);
    const char* tag = p.norm == PenaltyNorm::L2 ? "shofar" : "l1-shofar";
    return finish(std::move(prog), K_star, p, EstParams{}, tag, tol);
}

RobustTrainResult train_robust_est(const MatrixXd& K_hat, const VectorXd& y, double C,
                                   const RobustParams& p, const EstParams& e,
                                   double tol) {
    ConeProgram prog = build_shofar_est(K_hat, y, C, p, e);
    const char* tag = p.norm == PenaltyNorm::L2 ? "shofar-est" : "l1-shofar-est";
    return finish(std::move(prog), K_hat, p, e, tag, tol);
}

} // namespace qks
