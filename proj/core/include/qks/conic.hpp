#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qks {

enum class BlockKind { Zero, NonNeg, Soc };

// One constraint block: the vector A x + b lies in the block's cone.
//   Zero:   A x + b  = 0
//   NonNeg: A x + b >= 0 componentwise
//   Soc:    (A x + b)_0 >= || (A x + b)_{1:} ||_2
struct ConeBlock {
    BlockKind kind = BlockKind::NonNeg;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

struct ConeProgram {
    int n_vars = 0;
    Eigen::VectorXd objective; // minimize objective . x
    std::vector<ConeBlock> blocks;

    void add_zero(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
    void add_nonneg(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
    void add_soc(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

    // Throws std::invalid_argument on malformed programs.
    void validate() const;

    // Debugging dump, one block per section. Not a stable interchange format.
    std::string to_text() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

std::string to_string(SolveStatus s);

struct ConeSolution {
    Eigen::VectorXd x;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    int iterations = 0;
};

// Homogeneous self-dual interior-point solve. Deterministic given identical
// inputs. Status Optimal guarantees max(primal, dual, gap) <= tol.
ConeSolution solve(const ConeProgram& p, double tol = 1e-8, int max_iter = 100000);

// Smallest eigenvalue of a symmetric matrix.
double min_eig(const Eigen::MatrixXd& M);

// Symmetric PSD square root; eigenvalues in [-clip, 0) are clipped to 0,
// anything below -clip is an error.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M, double clip = 1e-9);

// M - min_eig(M) I when indefinite, M otherwise.
Eigen::MatrixXd spectral_shift(const Eigen::MatrixXd& M);

// SOC block encoding 1/2 beta' M beta <= t over a program with n_vars
// variables, via the rotated-cone identity ||(sqrt(2) A beta, t-1)|| <= t+1
// with A = psd_sqrt(M). beta_idx lists the column of each beta component.
ConeBlock quad_epigraph(const Eigen::MatrixXd& M, const std::vector<int>& beta_idx,
                        int t_idx, int n_vars, double clip = 1e-9);

} // namespace qks
