#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "qks/qkernel.hpp"

namespace qks {

struct LabeledDataset {
    Eigen::MatrixXd X; // one point per row
    Eigen::VectorXd y; // labels in {-1, +1}
    std::string name;
    std::uint64_t seed = 0;

    Eigen::Index size() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
    void validate() const;
};

// Two concentric circles (radius 1 labeled -1, radius `factor` labeled +1) at
// equally spaced angles with Gaussian jitter, rescaled to [0, pi]^2.
LabeledDataset gen_circles(Eigen::Index m, double noise_sd, double factor,
                           std::uint64_t seed);

// Two interleaving half-circles with Gaussian jitter, rescaled to [0, pi]^2.
LabeledDataset gen_moons(Eigen::Index m, double noise_sd, std::uint64_t seed);

// Points uniform inside the cells of a grid x grid partition of [0, pi]^2,
// allocated round-robin over cells; cell (i, j) carries label (-1)^(i+j).
LabeledDataset gen_checkerboard(Eigen::Index m, Eigen::Index grid,
                                std::uint64_t seed);

// Candidates uniform in [0, 2pi]^2 labeled by the sign of
// <phi(x)| V' (Z (x) Z) V |phi(x)> for a fixed seeded Haar-random V;
// candidates with |expectation| < gap are rejected, classes kept balanced.
LabeledDataset gen_havlicek(Eigen::Index m, double gap, std::uint64_t seed,
                            const EmbeddingSpec& spec);

void save_csv(const LabeledDataset& ds, const std::string& path);
LabeledDataset load_csv(const std::string& path);

} // namespace qks
