#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace qcs {

// Scrambles (master, index) into an independent 64-bit seed. Used to give
// every trial or task its own stream without any shared state, so results do
// not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Deterministic pseudo-random stream. One instance per logical task; never
// share an instance across threads.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed);

    static RandomStream derived(std::uint64_t master, std::uint64_t index) {
        return RandomStream(derive_seed(master, index));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    // Uniform integer in [0, n). n must be positive.
    std::size_t uniform_below(std::size_t n);

  private:
    std::mt19937_64 engine_;
};

}  // namespace qcs
