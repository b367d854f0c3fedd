#include "qks/qkernel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qks {

namespace {

using Complex = std::complex<double>;

void check_input(const EmbeddingSpec& spec, const Eigen::VectorXd& x) {
    if (spec.n_qubits < 1)
        throw std::invalid_argument("EmbeddingSpec: n_qubits must be >= 1");
    if (x.size() != spec.input_dim())
        throw std::invalid_argument("embed: input has dimension " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(spec.input_dim()));
}

// Rx(theta) = [[cos(t/2), -i sin(t/2)], [-i sin(t/2), cos(t/2)]] on qubit q.
// Qubit q addresses bit q of the basis index (little-endian).
void apply_rx(StateVector& psi, int q, double theta) {
    const double c = std::cos(0.5 * theta);
    const Complex ms(0.0, -std::sin(0.5 * theta));
    const Eigen::Index stride = Eigen::Index(1) << q;
    for (Eigen::Index base = 0; base < psi.size(); base += 2 * stride) {
        for (Eigen::Index k = base; k < base + stride; ++k) {
            const Complex a0 = psi(k);
            const Complex a1 = psi(k + stride);
            psi(k) = c * a0 + ms * a1;
            psi(k + stride) = ms * a0 + c * a1;
        }
    }
}

// D(x) H^n |0..0>: Hadamard wall then the diagonal IQP phase
// exp(i (sum_i x_i Z_i + sum_{i<j} x_i x_j Z_i Z_j)).
StateVector iqp_layer(const EmbeddingSpec& spec, const Eigen::VectorXd& x) {
    const int n = spec.n_qubits;
    const Eigen::Index dim = spec.dim();
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    StateVector psi(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        double phase = 0.0;
        for (int i = 0; i < n; ++i) {
            const double zi = ((k >> i) & 1) ? -1.0 : 1.0;
            phase += x(i) * zi;
            for (int j = i + 1; j < n; ++j) {
                const double zj = ((k >> j) & 1) ? -1.0 : 1.0;
                phase += x(i) * x(j) * zi * zj;
            }
        }
        psi(k) = amp * std::exp(Complex(0.0, phase));
    }
    return psi;
}

} // namespace

std::string to_string(EmbeddingKind k) {
    switch (k) {
    case EmbeddingKind::Angle: return "angle";
    case EmbeddingKind::IQP: return "iqp";
    case EmbeddingKind::IQPThenAngle: return "iqp-angle";
    }
    return "angle";
}

EmbeddingKind embedding_kind_from_string(const std::string& s) {
    if (s == "angle") return EmbeddingKind::Angle;
    if (s == "iqp") return EmbeddingKind::IQP;
    if (s == "iqp-angle") return EmbeddingKind::IQPThenAngle;
    throw std::invalid_argument("unknown embedding kind: " + s);
}

std::string EmbeddingSpec::id() const {
    return to_string(kind) + "/" + std::to_string(n_qubits) + "q";
}

StateVector embed(const EmbeddingSpec& spec, const Eigen::VectorXd& x) {
    check_input(spec, x);
    const Eigen::Index dim = spec.dim();

    StateVector psi;
    switch (spec.kind) {
    case EmbeddingKind::Angle: {
        psi = StateVector::Zero(dim);
        psi(0) = 1.0;
        for (int q = 0; q < spec.n_qubits; ++q) apply_rx(psi, q, x(q));
        break;
    }
    case EmbeddingKind::IQP:
        psi = iqp_layer(spec, x);
        break;
    case EmbeddingKind::IQPThenAngle:
        psi = iqp_layer(spec, x);
        for (int q = 0; q < spec.n_qubits; ++q) apply_rx(psi, q, x(q));
        break;
    }
    return psi;
}

double kernel_exact(const EmbeddingSpec& spec, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& x2) {
    const StateVector a = embed(spec, x);
    const StateVector b = embed(spec, x2);
    const double k = std::norm(a.dot(b));
    return std::min(1.0, std::max(0.0, k));
}

Eigen::MatrixXd kernel_matrix_exact(const EmbeddingSpec& spec,
                                    const Eigen::MatrixXd& X,
                                    const Eigen::MatrixXd& X2) {
    if (X.rows() == 0 || X2.rows() == 0)
        throw std::invalid_argument("kernel_matrix_exact: empty point list");
    if (X.cols() != spec.input_dim() || X2.cols() != spec.input_dim())
        throw std::invalid_argument("kernel_matrix_exact: point dimension mismatch");

    std::vector<StateVector> sa(X.rows()), sb(X2.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) sa[i] = embed(spec, X.row(i));
    for (Eigen::Index j = 0; j < X2.rows(); ++j) sb[j] = embed(spec, X2.row(j));

    Eigen::MatrixXd K(X.rows(), X2.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X2.rows(); ++j)
            K(i, j) = std::min(1.0, std::max(0.0, std::norm(sa[i].dot(sb[j]))));
    return K;
}

Eigen::MatrixXd kernel_matrix_exact(const EmbeddingSpec& spec,
                                    const Eigen::MatrixXd& X) {
    if (X.rows() == 0)
        throw std::invalid_argument("kernel_matrix_exact: empty point list");
    if (X.cols() != spec.input_dim())
        throw std::invalid_argument("kernel_matrix_exact: point dimension mismatch");

    std::vector<StateVector> s(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) s[i] = embed(spec, X.row(i));

    // Compute once and mirror; exact unit diagonal.
    Eigen::MatrixXd K(X.rows(), X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < X.rows(); ++j) {
            const double k = std::min(1.0, std::max(0.0, std::norm(s[i].dot(s[j]))));
            K(i, j) = k;
            K(j, i) = k;
        }
    }
    return K;
}

DepolarizingChannel::DepolarizingChannel(double lambda_, int d_)
    : lambda(lambda_), d(d_) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("DepolarizingChannel: lambda must lie in [0,1]");
    if (d < 2 || (d & (d - 1)) != 0)
        throw std::invalid_argument("DepolarizingChannel: d must be a power of two >= 2");
}

double DepolarizingChannel::apply(double k) const {
    const double l2 = lambda * lambda;
    return (1.0 - l2) * k + l2 / static_cast<double>(d);
}

Eigen::MatrixXd DepolarizingChannel::apply(const Eigen::MatrixXd& K) const {
    const double l2 = lambda * lambda;
    return ((1.0 - l2) * K.array() + l2 / static_cast<double>(d)).matrix();
}

} // namespace qks
