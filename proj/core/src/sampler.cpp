#include "qks/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qks {

namespace {

// Exact binomial draw as a count of thresholded splitmix words. O(N); used
// for small N where it is both fastest and free of float rounding.
int64_t binomial_count(int64_t n, double p, SplitMix64& rng) {
    // u64 threshold so that P(word < thr) == p up to one ulp of the lattice
    const uint64_t thr = static_cast<uint64_t>(std::ldexp(p, 64));
    int64_t k = 0;
    for (int64_t i = 0; i < n; ++i) k += (rng.next() < thr) ? 1 : 0;
    return k;
}

// Inversion via geometric inter-success gaps; expected cost O(n p).
int64_t binomial_inversion(int64_t n, double p, SplitMix64& rng) {
    const double log_q = std::log1p(-p);
    int64_t count = 0;
    double trials = 0.0;
    while (true) {
        double u = rng.uniform();
        if (u <= 0.0) u = std::ldexp(1.0, -64);
        trials += std::ceil(std::log(u) / log_q);
        if (trials > static_cast<double>(n)) return count;
        ++count;
    }
}

double stirling_tail(double k) {
    static const double table[] = {
        0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
        0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
        0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
        0.00833056343336287};
    if (k <= 9.0) return table[static_cast<int>(k)];
    const double kp1sq = (k + 1.0) * (k + 1.0);
    return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1.0);
}

// Transformed-rejection (BTRS) sampler for n * p >= 10, p <= 0.5; constant
// expected number of uniforms per draw.
int64_t binomial_btrs(int64_t n_int, double p, SplitMix64& rng) {
    const double n = static_cast<double>(n_int);
    const double stddev = std::sqrt(n * p * (1.0 - p));
    const double b = 1.15 + 2.53 * stddev;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = n * p + 0.5;
    const double v_r = 0.92 - 4.2 / b;
    const double r = p / (1.0 - p);
    const double alpha = (2.83 + 5.1 / b) * stddev;
    const double m = std::floor((n + 1.0) * p);
    while (true) {
        const double u = rng.uniform() - 0.5;
        double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + c);
        if (kf < 0.0 || kf > n) continue;
        if (us >= 0.07 && v <= v_r) return static_cast<int64_t>(kf);
        v = std::log(v * alpha / (a / (us * us) + b));
        const double upper =
            (m + 0.5) * std::log((m + 1.0) / (r * (n - m + 1.0))) +
            (n + 1.0) * std::log((n - m + 1.0) / (n - kf + 1.0)) +
            (kf + 0.5) * std::log(r * (n - kf + 1.0) / (kf + 1.0)) +
            stirling_tail(m) + stirling_tail(n - m) - stirling_tail(kf) -
            stirling_tail(n - kf);
        if (v <= upper) return static_cast<int64_t>(kf);
    }
}

int64_t draw_binomial(int64_t n, double p, SplitMix64& rng) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - draw_binomial(n, 1.0 - p, rng);
    if (n <= 128) return binomial_count(n, p, rng);
    if (static_cast<double>(n) * p < 10.0) return binomial_inversion(n, p, rng);
    return binomial_btrs(n, p, rng);
}

uint64_t entry_seed(uint64_t seed, Eigen::Index i, Eigen::Index j) {
    return mix_seed(seed, static_cast<uint64_t>(i), static_cast<uint64_t>(j));
}

} // namespace

std::string to_string(CircuitKind k) {
    return k == CircuitKind::GATES ? "gates" : "swap";
}

CircuitKind circuit_kind_from_string(const std::string& s) {
    if (s == "gates") return CircuitKind::GATES;
    if (s == "swap") return CircuitKind::SWAP;
    throw std::invalid_argument("unknown circuit kind: " + s);
}

double circuit_factor(CircuitKind kind) {
    return kind == CircuitKind::GATES ? 1.0 : 2.0;
}

double sigma0(CircuitKind kind, int64_t shots) {
    if (shots < 1) throw std::invalid_argument("sigma0: shots must be >= 1");
    return circuit_factor(kind) / (2.0 * std::sqrt(static_cast<double>(shots)));
}

double draw_kernel(double k_star, const ShotPlan& plan, SplitMix64& rng) {
    if (k_star < 0.0 || k_star > 1.0)
        throw std::invalid_argument("draw_kernel: k_star must lie in [0,1]");
    if (plan.shots < 1)
        throw std::invalid_argument("draw_kernel: shots must be >= 1");

    const double n = static_cast<double>(plan.shots);
    if (plan.kind == CircuitKind::GATES) {
        return static_cast<double>(draw_binomial(plan.shots, k_star, rng)) / n;
    }
    const double p = 0.5 * (1.0 + k_star);
    return 2.0 * static_cast<double>(draw_binomial(plan.shots, p, rng)) / n - 1.0;
}

EstimatedKernelMatrix draw_kernel_matrix(const Eigen::MatrixXd& K_star,
                                         const ShotPlan& plan, uint64_t seed) {
    EstimatedKernelMatrix out;
    out.entries.resize(K_star.rows(), K_star.cols());
    out.provenance = plan;
    out.seed = seed;
    for (Eigen::Index i = 0; i < K_star.rows(); ++i) {
        for (Eigen::Index j = 0; j < K_star.cols(); ++j) {
            SplitMix64 rng(entry_seed(seed, i, j));
            out.entries(i, j) = draw_kernel(K_star(i, j), plan, rng);
        }
    }
    return out;
}

EstimatedKernelMatrix draw_kernel_matrix_sym(const Eigen::MatrixXd& K_star,
                                             const ShotPlan& plan, uint64_t seed,
                                             bool sample_diagonal) {
    if (K_star.rows() != K_star.cols())
        throw std::invalid_argument("draw_kernel_matrix_sym: matrix must be square");
    EstimatedKernelMatrix out;
    out.entries.resize(K_star.rows(), K_star.cols());
    out.provenance = plan;
    out.seed = seed;
    out.same_set = true;
    out.sampled_diagonal = sample_diagonal;
    for (Eigen::Index i = 0; i < K_star.rows(); ++i) {
        if (sample_diagonal) {
            SplitMix64 rng(entry_seed(seed, i, i));
            out.entries(i, i) = draw_kernel(K_star(i, i), plan, rng);
        } else {
            out.entries(i, i) = 1.0;
        }
        for (Eigen::Index j = i + 1; j < K_star.cols(); ++j) {
            SplitMix64 rng(entry_seed(seed, i, j));
            const double v = draw_kernel(K_star(i, j), plan, rng);
            out.entries(i, j) = v;
            out.entries(j, i) = v;
        }
    }
    return out;
}

double estimator_variance(CircuitKind kind, double k_star, int64_t shots) {
    if (k_star < 0.0 || k_star > 1.0)
        throw std::invalid_argument("estimator_variance: k_star must lie in [0,1]");
    if (shots < 1)
        throw std::invalid_argument("estimator_variance: shots must be >= 1");
    const double n = static_cast<double>(shots);
    if (kind == CircuitKind::GATES) return k_star * (1.0 - k_star) / n;
    return (1.0 - k_star * k_star) / n;
}

double bernoulli_variance_proxy(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("bernoulli_variance_proxy: p must lie in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    if (p == 0.5) return 0.25;
    const double q = 1.0 - p;
    return (p - q) / (2.0 * (std::log(p) - std::log(q)));
}

void save_csv(const EstimatedKernelMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path);
    out << "row,col,value\n";
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g\n",
                          static_cast<long long>(i), static_cast<long long>(j),
                          m.entries(i, j));
            out << buf;
        }
}

namespace {
constexpr char kMagic[8] = {'Q', 'K', 'S', 'K', 'M', 'A', 'T', '1'};
}

void save_binary(const EstimatedKernelMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_binary: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    const int64_t rows = m.rows(), cols = m.cols();
    const int64_t kind = m.provenance.kind == CircuitKind::GATES ? 0 : 1;
    const int64_t shots = m.provenance.shots;
    const uint64_t seed = m.seed;
    const int64_t flags = (m.same_set ? 1 : 0) | (m.sampled_diagonal ? 2 : 0);
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    out.write(reinterpret_cast<const char*>(&kind), 8);
    out.write(reinterpret_cast<const char*>(&shots), 8);
    out.write(reinterpret_cast<const char*>(&seed), 8);
    out.write(reinterpret_cast<const char*>(&flags), 8);
    out.write(reinterpret_cast<const char*>(m.entries.data()),
              static_cast<std::streamsize>(sizeof(double)) * rows * cols);
}

EstimatedKernelMatrix load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_binary: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("load_binary: bad magic in " + path);
    int64_t rows, cols, kind, shots, flags;
    uint64_t seed;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    in.read(reinterpret_cast<char*>(&kind), 8);
    in.read(reinterpret_cast<char*>(&shots), 8);
    in.read(reinterpret_cast<char*>(&seed), 8);
    in.read(reinterpret_cast<char*>(&flags), 8);
    if (!in || rows < 1 || cols < 1 || shots < 1)
        throw std::runtime_error("load_binary: corrupt header in " + path);
    EstimatedKernelMatrix m;
    m.entries.resize(rows, cols);
    m.provenance.kind = kind == 0 ? CircuitKind::GATES : CircuitKind::SWAP;
    m.provenance.shots = shots;
    m.seed = seed;
    m.same_set = (flags & 1) != 0;
    m.sampled_diagonal = (flags & 2) != 0;
    in.read(reinterpret_cast<char*>(m.entries.data()),
            static_cast<std::streamsize>(sizeof(double)) * rows * cols);
    if (!in) throw std::runtime_error("load_binary: truncated data in " + path);
    return m;
}

} // namespace qks
