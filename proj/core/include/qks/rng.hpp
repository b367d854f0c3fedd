#pragma once

#include <cstdint>

namespace qks {

// Counter-friendly splitmix64 stream. Fixed algorithm so that seeded runs are
// bit-identical across platforms and compilers.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    uint64_t state_;
};

// Mixes a list of words into a single sub-stream seed. Used for per-entry
// seeding of kernel draws: (master, tag, row, col, trial, ...) -> seed.
inline uint64_t mix_seed(uint64_t a) {
    SplitMix64 g(a);
    return g.next();
}

template <typename... Rest>
inline uint64_t mix_seed(uint64_t a, Rest... rest) {
    return mix_seed(a * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL + mix_seed(rest...));
}

} // namespace qks
