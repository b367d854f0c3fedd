#include "qks/svm.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qks {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<Eigen::Index> SvmModel::support_indices(double rel_tol) const {
    const double thresh = rel_tol * std::max(1.0, beta.lpNorm<Eigen::Infinity>());
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < beta.size(); ++i)
        if (std::abs(beta(i)) > thresh) idx.push_back(i);
    return idx;
}

Eigen::Index SvmModel::n_support(double rel_tol) const {
    return static_cast<Eigen::Index>(support_indices(rel_tol).size());
}

static void check_labels(const VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 1.0 && y(i) != -1.0)
            throw std::invalid_argument("labels must be -1 or +1");
}

SvmModel solve_primal(const MatrixXd& K, const VectorXd& y, double C, double tol) {
    const Eigen::Index m = K.rows();
    if (K.cols() != m) throw std::invalid_argument("solve_primal: K must be square");
    if (y.size() != m) throw std::invalid_argument("solve_primal: label count mismatch");
    if (C <= 0.0) throw std::invalid_argument("solve_primal: C must be positive");
    check_labels(y);

    // variables: [beta(m), b, xi(m), t]
    const Eigen::Index n = 2 * m + 2;
    const Eigen::Index ib = m;       // bias
    const Eigen::Index ixi = m + 1;  // slacks
    const Eigen::Index it = 2 * m + 1;

    ConeProgram p;
    p.n_vars = n;
    p.objective = VectorXd::Zero(n);
    p.objective.segment(ixi, m).setConstant(C);
    p.objective(it) = 1.0;

    // xi >= 0
    {
        MatrixXd A = MatrixXd::Zero(m, n);
        A.block(0, ixi, m, m).setIdentity();
        p.add_nonneg(A, VectorXd::Zero(m));
    }
    // hinge: y_i (K_i. beta + b) + xi_i - 1 >= 0
    {
        MatrixXd A = MatrixXd::Zero(m, n);
        A.block(0, 0, m, m) = y.asDiagonal() * K;
        A.col(ib) = y;
        A.block(0, ixi, m, m).setIdentity();
        p.add_nonneg(A, VectorXd::Constant(m, -1.0));
    }
    // (1/2) beta' K beta <= t
    std::vector<int> beta_idx(m);
    for (Eigen::Index i = 0; i < m; ++i) beta_idx[i] = static_cast<int>(i);
    p.blocks.push_back(quad_epigraph(K, beta_idx, static_cast<int>(it), n));

    ConeSolution sol = solve(p, tol);
    if (sol.status != SolveStatus::Optimal)
        throw std::runtime_error("solve_primal: cone solver did not reach optimality");

    SvmModel model;
    model.beta = sol.x.head(m);
    model.bias = sol.x(ib);
    model.variant = "svm";
    return model;
}

VectorXd decision_values(const SvmModel& model, const MatrixXd& K_eval) {
    if (K_eval.rows() != model.beta.size())
        throw std::invalid_argument("decision_values: kernel block row count mismatch");
    return (K_eval.transpose() * model.beta).array() + model.bias;
}

VectorXd classify(const SvmModel& model, const MatrixXd& K_eval) {
    VectorXd f = decision_values(model, K_eval);
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = f(i) >= 0.0 ? 1.0 : -1.0;
    return f;
}

double accuracy(const VectorXd& predicted, const VectorXd& y) {
    if (predicted.size() != y.size())
        throw std::invalid_argument("accuracy: size mismatch");
    if (y.size() == 0) throw std::invalid_argument("accuracy: empty labels");
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (predicted(i) == y(i)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

double gamma_margin_error(const VectorXd& decision, const VectorXd& y, double gamma) {
    if (decision.size() != y.size())
        throw std::invalid_argument("gamma_margin_error: size mismatch");
    if (y.size() == 0) throw std::invalid_argument("gamma_margin_error: empty labels");
    Eigen::Index bad = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) * decision(i) < gamma) ++bad;
        // keep gamma = 0 consistent with sgn(0) = +1: a -1 point sitting
        // exactly on the boundary is misclassified
        else if (gamma == 0.0 && decision(i) == 0.0 && y(i) < 0.0) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(y.size());
}

void save_model(const SvmModel& model, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_model: cannot open " + path);
    f << "qks-model 1\n";
    f << "variant " << (model.variant.empty() ? "svm" : model.variant) << "\n";
    f << "embedding " << (model.embedding.empty() ? "none" : model.embedding) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", model.bias);
    f << "bias " << buf << "\n";
    f << "m " << model.beta.size() << "\n";
    f << "dim " << model.X_train.cols() << "\n";
    for (Eigen::Index i = 0; i < model.beta.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", model.beta(i));
        f << buf;
        for (Eigen::Index j = 0; j < model.X_train.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", model.X_train(i, j));
            f << ' ' << buf;
        }
        f << '\n';
    }
}

SvmModel load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_model: cannot open " + path);
    std::string tag;
    int version = 0;
    f >> tag >> version;
    if (tag != "qks-model" || version != 1)
        throw std::runtime_error("load_model: unrecognized model file " + path);
    SvmModel model;
    Eigen::Index m = 0, dim = 0;
    f >> tag >> model.variant;
    if (tag != "variant") throw std::runtime_error("load_model: bad header");
    f >> tag >> model.embedding;
    if (tag != "embedding") throw std::runtime_error("load_model: bad header");
    f >> tag >> model.bias;
    if (tag != "bias") throw std::runtime_error("load_model: bad header");
    f >> tag >> m;
    if (tag != "m") throw std::runtime_error("load_model: bad header");
    f >> tag >> dim;
    if (tag != "dim") throw std::runtime_error("load_model: bad header");
    model.beta.resize(m);
    model.X_train.resize(m, dim);
    for (Eigen::Index i = 0; i < m; ++i) {
        f >> model.beta(i);
        for (Eigen::Index j = 0; j < dim; ++j) f >> model.X_train(i, j);
    }
    if (!f) throw std::runtime_error("load_model: truncated file " + path);
    if (model.embedding == "none") model.embedding.clear();
    return model;
}

} // namespace qks
