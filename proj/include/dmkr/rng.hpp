#pragma once

#include <cstdint>
#include <random>

namespace dmkr::rng {

// All stochastic choices in the library flow from the single config seed
// through mt19937_64, with sub-streams derived by splitmix64 so that the
// Arnoldi runs and the classical sampler never share draws. Reals are mapped
// as (x >> 11) * 2^-53, giving bit-identical sequences on any conforming
// implementation (std::*_distribution is deliberately avoided).

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

enum class Stream : std::uint64_t {
    ArnoldiRight = 1,
    ArnoldiLeft = 2,
    Classical = 3,
};

inline std::mt19937_64 engine(std::uint64_t seed, Stream stream) {
    return std::mt19937_64(
        splitmix64(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(stream))));
}

/// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_sym(std::mt19937_64& g) { return 2.0 * uniform01(g) - 1.0; }

}  // namespace dmkr::rng
