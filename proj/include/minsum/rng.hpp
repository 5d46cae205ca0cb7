#pragma once

#include <cstdint>
#include <random>

namespace minsum {

/// mt19937_64 with hand-rolled output mappings. std::uniform_*_distribution
/// is not specified bit-for-bit across standard libraries; these mappings
/// are, which keeps seeded runs portable.
struct Rng {
    std::mt19937_64 state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t bits() { return state(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in [0, n); n >= 1. Fixed-point multiply, deterministic.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits()) * n) >> 64);
    }

    /// Uniform integer in [lo, hi] inclusive.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool bernoulli(double prob) { return uniform() < prob; }
};

}  // namespace minsum
