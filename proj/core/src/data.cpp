#include "qks/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qks/rng.hpp"

namespace qks {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void LabeledDataset::validate() const {
    if (X.rows() != y.size())
        throw std::invalid_argument("dataset: point/label count mismatch");
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 1.0 && y(i) != -1.0)
            throw std::invalid_argument("dataset: labels must be -1 or +1");
}

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian(SplitMix64& rng) {
    // Box-Muller; one draw discarded to keep the generation path simple and
    // platform-stable.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Per-coordinate min-max rescale to [0, pi].
void rescale_to_box(MatrixXd& X) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double lo = X.col(j).minCoeff();
        const double hi = X.col(j).maxCoeff();
        const double span = hi - lo;
        if (span <= 0.0) {
            X.col(j).setConstant(0.5 * kPi);
            continue;
        }
        X.col(j) = (X.col(j).array() - lo) / span * kPi;
    }
}

} // namespace

LabeledDataset gen_circles(Eigen::Index m, double noise_sd, double factor,
                           std::uint64_t seed) {
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("gen_circles: m must be even and >= 2");
    if (!(factor > 0.0) || factor >= 1.0)
        throw std::invalid_argument("gen_circles: factor must lie in (0, 1)");
    if (noise_sd < 0.0) throw std::invalid_argument("gen_circles: negative noise");

    LabeledDataset ds;
    ds.name = "circles";
    ds.seed = seed;
    ds.X.resize(m, 2);
    ds.y.resize(m);
    SplitMix64 rng(mix_seed(seed, 0x11));
    const Eigen::Index half = m / 2;
    for (Eigen::Index k = 0; k < half; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(half);
        ds.X(k, 0) = std::cos(th) + noise_sd * gaussian(rng);
        ds.X(k, 1) = std::sin(th) + noise_sd * gaussian(rng);
        ds.y(k) = -1.0;
        ds.X(half + k, 0) = factor * std::cos(th) + noise_sd * gaussian(rng);
        ds.X(half + k, 1) = factor * std::sin(th) + noise_sd * gaussian(rng);
        ds.y(half + k) = 1.0;
    }
    rescale_to_box(ds.X);
    return ds;
}

LabeledDataset gen_moons(Eigen::Index m, double noise_sd, std::uint64_t seed) {
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("gen_moons: m must be even and >= 2");
    if (noise_sd < 0.0) throw std::invalid_argument("gen_moons: negative noise");

    LabeledDataset ds;
    ds.name = "moons";
    ds.seed = seed;
    ds.X.resize(m, 2);
    ds.y.resize(m);
    SplitMix64 rng(mix_seed(seed, 0x22));
    const Eigen::Index half = m / 2;
    for (Eigen::Index k = 0; k < half; ++k) {
        const double t = kPi * static_cast<double>(k) / static_cast<double>(half - 1 > 0 ? half - 1 : 1);
        ds.X(k, 0) = std::cos(t) + noise_sd * gaussian(rng);
        ds.X(k, 1) = std::sin(t) + noise_sd * gaussian(rng);
        ds.y(k) = -1.0;
        ds.X(half + k, 0) = 1.0 - std::cos(t) + noise_sd * gaussian(rng);
        ds.X(half + k, 1) = 0.5 - std::sin(t) + noise_sd * gaussian(rng);
        ds.y(half + k) = 1.0;
    }
    rescale_to_box(ds.X);
    return ds;
}

LabeledDataset gen_checkerboard(Eigen::Index m, Eigen::Index grid,
                                std::uint64_t seed) {
    if (grid < 1) throw std::invalid_argument("gen_checkerboard: grid must be >= 1");
    if (m < grid * grid)
        throw std::invalid_argument("gen_checkerboard: m must be >= grid^2");

    LabeledDataset ds;
    ds.name = "checkerboard";
    ds.seed = seed;
    ds.X.resize(m, 2);
    ds.y.resize(m);
    SplitMix64 rng(mix_seed(seed, 0x33));
    const double cell = kPi / static_cast<double>(grid);
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index c = k % (grid * grid); // round-robin over cells
        const Eigen::Index i = c / grid, j = c % grid;
        ds.X(k, 0) = (static_cast<double>(i) + rng.uniform()) * cell;
        ds.X(k, 1) = (static_cast<double>(j) + rng.uniform()) * cell;
        ds.y(k) = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    }
    return ds;
}

LabeledDataset gen_havlicek(Eigen::Index m, double gap, std::uint64_t seed,
                            const EmbeddingSpec& spec) {
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("gen_havlicek: m must be even and >= 2");
    if (!(gap > 0.0) || gap >= 1.0)
        throw std::invalid_argument("gen_havlicek: gap must lie in (0, 1)");

    const Eigen::Index d = spec.dim();
    SplitMix64 rng(mix_seed(seed, 0x44));

    // Haar-random unitary: QR of a complex Gaussian matrix with the diagonal
    // of R normalized to unit phase.
    Eigen::MatrixXcd G(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            G(i, j) = std::complex<double>(gaussian(rng), gaussian(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    Eigen::MatrixXcd Q = qr.householderQ();
    Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const std::complex<double> r = R(i, i);
        Q.col(i) *= std::abs(r) > 0.0 ? r / std::abs(r) : 1.0;
    }

    // Parity observable: diagonal (-1)^popcount(index), i.e. Z on every qubit.
    VectorXd parity(d);
    for (Eigen::Index i = 0; i < d; ++i)
        parity(i) = __builtin_popcountll(static_cast<unsigned long long>(i)) % 2 == 0
                        ? 1.0
                        : -1.0;

    LabeledDataset ds;
    ds.name = "havlicek";
    ds.seed = seed;
    ds.X.resize(m, spec.input_dim());
    ds.y.resize(m);

    const Eigen::Index per_class = m / 2;
    Eigen::Index n_pos = 0, n_neg = 0, accepted = 0;
    for (long attempt = 0; attempt < 1000000 && accepted < m; ++attempt) {
        VectorXd x(spec.input_dim());
        for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = 2.0 * kPi * rng.uniform();
        const StateVector v = Q * embed(spec, x);
        double e = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) e += parity(i) * std::norm(v(i));
        if (std::abs(e) < gap) continue;
        const double label = e >= 0.0 ? 1.0 : -1.0;
        Eigen::Index& count = label > 0.0 ? n_pos : n_neg;
        if (count >= per_class) continue;
        ds.X.row(accepted) = x.transpose();
        ds.y(accepted) = label;
        ++count;
        ++accepted;
    }
    if (accepted < m)
        throw std::runtime_error(
            "gen_havlicek: acceptance stalled after 1e6 candidates; try a smaller gap");
    return ds;
}

void save_csv(const LabeledDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_csv: cannot open " + path);
    for (Eigen::Index j = 0; j < ds.dim(); ++j) f << 'x' << (j + 1) << ',';
    f << "label\n";
    char buf[64];
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        for (Eigen::Index j = 0; j < ds.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.X(i, j));
            f << buf << ',';
        }
        f << (ds.y(i) > 0.0 ? "1" : "-1") << '\n';
    }
    std::ofstream meta(path + ".meta");
    if (!meta) throw std::runtime_error("save_csv: cannot open " + path + ".meta");
    meta << "{\n  \"name\": \"" << ds.name << "\",\n  \"seed\": " << ds.seed
         << "\n}\n";
}

LabeledDataset load_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line.empty())
        throw std::runtime_error("load_csv: " + path + ":1: missing header");

    Eigen::Index dim = 0;
    {
        std::stringstream ss(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.empty() || cols.back() != "label")
            throw std::runtime_error("load_csv: " + path + ":1: last column must be 'label'");
        dim = static_cast<Eigen::Index>(cols.size()) - 1;
        if (dim < 1)
            throw std::runtime_error("load_csv: " + path + ":1: no feature columns");
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t pos = 0;
                vals.push_back(std::stod(cell, &pos));
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("load_csv: " + path + ":" +
                                         std::to_string(lineno) + ": bad number '" +
                                         cell + "'");
            }
        }
        if (static_cast<Eigen::Index>(vals.size()) != dim + 1)
            throw std::runtime_error("load_csv: " + path + ":" +
                                     std::to_string(lineno) + ": wrong column count");
        const double label = vals.back();
        if (label != 1.0 && label != -1.0)
            throw std::runtime_error("load_csv: " + path + ":" +
                                     std::to_string(lineno) + ": label must be -1 or 1");
        vals.pop_back();
        rows.push_back(std::move(vals));
        labels.push_back(label);
    }
    if (rows.empty())
        throw std::runtime_error("load_csv: " + path + ": no data rows");

    LabeledDataset ds;
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), dim);
    ds.y.resize(static_cast<Eigen::Index>(labels.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (Eigen::Index j = 0; j < dim; ++j)
            ds.X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<size_t>(j)];
        ds.y(static_cast<Eigen::Index>(i)) = labels[i];
    }

    std::ifstream meta(path + ".meta");
    if (meta) {
        std::string m((std::istreambuf_iterator<char>(meta)),
                      std::istreambuf_iterator<char>());
        auto grab = [&m](const std::string& key) -> std::string {
            const auto k = m.find("\"" + key + "\":");
            if (k == std::string::npos) return {};
            auto v = m.find_first_not_of(" \t", k + key.size() + 3);
            if (v == std::string::npos) return {};
            auto e = m.find_first_of(",\n}", v);
            std::string s = m.substr(v, e - v);
            if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
            return s;
        };
        ds.name = grab("name");
        const std::string seed = grab("seed");
        if (!seed.empty()) ds.seed = std::stoull(seed);
    }
    ds.validate();
    return ds;
}

} // namespace qks
