#include "qks/conic.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qks {

namespace {

void check_block(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int n_vars) {
    if (A.rows() != b.size())
        throw std::invalid_argument("ConeBlock: A rows and b size disagree");
    if (A.cols() != n_vars)
        throw std::invalid_argument("ConeBlock: block width does not match n_vars");
    if (A.rows() == 0)
        throw std::invalid_argument("ConeBlock: empty block");
}

void check_symmetric(const Eigen::MatrixXd& M, const char* who) {
    if (M.rows() != M.cols())
        throw std::invalid_argument(std::string(who) + ": matrix not square");
    const double dev = (M - M.transpose()).cwiseAbs().maxCoeff();
    if (dev > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()))
        throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

} // namespace

void ConeProgram::add_zero(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    check_block(A, b, n_vars);
    blocks.push_back({BlockKind::Zero, A, b});
}

void ConeProgram::add_nonneg(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    check_block(A, b, n_vars);
    blocks.push_back({BlockKind::NonNeg, A, b});
}

void ConeProgram::add_soc(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    check_block(A, b, n_vars);
    if (A.rows() < 2)
        throw std::invalid_argument("ConeProgram: SOC block needs >= 2 rows");
    blocks.push_back({BlockKind::Soc, A, b});
}

void ConeProgram::validate() const {
    if (n_vars < 1)
        throw std::invalid_argument("ConeProgram: n_vars must be >= 1");
    if (objective.size() != n_vars)
        throw std::invalid_argument("ConeProgram: objective length != n_vars");
    if (blocks.empty())
        throw std::invalid_argument("ConeProgram: structurally empty program");
    for (const auto& blk : blocks) {
        check_block(blk.A, blk.b, n_vars);
        if (blk.kind == BlockKind::Soc && blk.A.rows() < 2)
            throw std::invalid_argument("ConeProgram: SOC block needs >= 2 rows");
    }
}

std::string ConeProgram::to_text() const {
    std::ostringstream out;
    out << "coneprogram n_vars " << n_vars << "\n";
    out << "objective";
    for (Eigen::Index i = 0; i < objective.size(); ++i) out << " " << objective(i);
    out << "\n";
    for (const auto& blk : blocks) {
        switch (blk.kind) {
        case BlockKind::Zero: out << "block zero "; break;
        case BlockKind::NonNeg: out << "block nonneg "; break;
        case BlockKind::Soc: out << "block soc "; break;
        }
        out << blk.A.rows() << "\n";
        for (Eigen::Index r = 0; r < blk.A.rows(); ++r) {
            for (Eigen::Index c = 0; c < blk.A.cols(); ++c) out << blk.A(r, c) << " ";
            out << "| " << blk.b(r) << "\n";
        }
    }
    return out.str();
}

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIter: return "maxiter";
    }
    return "maxiter";
}

double min_eig(const Eigen::MatrixXd& M) {
    check_symmetric(M, "min_eig");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M, double clip) {
    check_symmetric(M, "psd_sqrt");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -clip)
        throw std::invalid_argument("psd_sqrt: matrix is not PSD (min eigenvalue " +
                                    std::to_string(ev.minCoeff()) + " < -clip)");
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd spectral_shift(const Eigen::MatrixXd& M) {
    const double lam = min_eig(M);
    if (lam >= 0.0) return M;
    return M - lam * Eigen::MatrixXd::Identity(M.rows(), M.cols());
}

ConeBlock quad_epigraph(const Eigen::MatrixXd& M, const std::vector<int>& beta_idx,
                        int t_idx, int n_vars, double clip) {
    if (static_cast<Eigen::Index>(beta_idx.size()) != M.rows())
        throw std::invalid_argument("quad_epigraph: beta_idx size != M dimension");
    const Eigen::MatrixXd Asqrt = psd_sqrt(M, clip);
    const Eigen::Index m = M.rows();

    ConeBlock blk;
    blk.kind = BlockKind::Soc;
    blk.A = Eigen::MatrixXd::Zero(m + 2, n_vars);
    blk.b = Eigen::VectorXd::Zero(m + 2);
    blk.A(0, t_idx) = 1.0;
    blk.b(0) = 1.0;
    const double rt2 = std::sqrt(2.0);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c)
            blk.A(1 + r, beta_idx[static_cast<size_t>(c)]) = rt2 * Asqrt(r, c);
    blk.A(m + 1, t_idx) = 1.0;
    blk.b(m + 1) = -1.0;
    return blk;
}

} // namespace qks
