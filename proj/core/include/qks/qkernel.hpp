#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace qks {

enum class EmbeddingKind { Angle, IQP, IQPThenAngle };

std::string to_string(EmbeddingKind k);
EmbeddingKind embedding_kind_from_string(const std::string& s);

// Data-embedding circuit family. All implemented kinds act on n_qubits
// qubits and consume one feature per qubit.
struct EmbeddingSpec {
    EmbeddingKind kind = EmbeddingKind::Angle;
    int n_qubits = 2;

    int input_dim() const { return n_qubits; }
    int dim() const { return 1 << n_qubits; }
    std::string id() const;
};

using StateVector = Eigen::VectorXcd;

// |phi(x)> = U(x)|0...0>. Unit norm to 1e-12.
StateVector embed(const EmbeddingSpec& spec, const Eigen::VectorXd& x);

// Quantum embedding kernel K(x, x2) = |<phi(x)|phi(x2)>|^2, in [0, 1].
double kernel_exact(const EmbeddingSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x2);

// Entry (i,j) = kernel_exact(X.row(i), X2.row(j)). When X and X2 are the
// same point set the result is symmetric with unit diagonal and PSD.
Eigen::MatrixXd kernel_matrix_exact(const EmbeddingSpec& spec,
                                    const Eigen::MatrixXd& X,
                                    const Eigen::MatrixXd& X2);
Eigen::MatrixXd kernel_matrix_exact(const EmbeddingSpec& spec,
                                    const Eigen::MatrixXd& X);

// Depolarizing channel acting at the kernel level:
// k -> (1 - lambda^2) k + lambda^2 / d, with uniform per-point lambda.
struct DepolarizingChannel {
    double lambda = 0.0;
    int d = 4;

    DepolarizingChannel(double lambda_, int d_);
    double apply(double k) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& K) const;
};

} // namespace qks
