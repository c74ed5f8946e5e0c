#pragma once

#include <cstdint>

namespace latcalc {

/// Deterministic generator (splitmix64). Hand-rolled so that reports are
/// byte-identical for a given seed regardless of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t nextU64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniformInt(int lo, int hi) {
        return lo + static_cast<int>(nextU64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return (nextU64() & 1ull) != 0; }

private:
    std::uint64_t state_;
};

}  // namespace latcalc
