// Counter-based pseudo-random generator (splitmix64 run in counter mode).
//
// Every Monte Carlo round owns a (seed, stream) pair, so randomization
// rounds can be partitioned across OpenMP workers in any order and still
// produce the same draws as the serial reference loop.
#pragma once

#include <cstdint>

namespace polysemy {

class CounterRng {
 public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9e3779b97f4a7c15ull * mix(stream + 0x632be59bd9b4e019ull))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps the
    // draw unbiased for any bound.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

 private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace polysemy
