/// @file rng.hpp
/// @brief Seeded randomness helpers; every stochastic path in the library is
///        deterministic given its seed.

#ifndef ILUAMG_RNG_HPP
#define ILUAMG_RNG_HPP

#include "iluamg/sparse.hpp"

#include <cstdint>
#include <random>

namespace iluamg {

/// splitmix64 mix; used for per-index jitter (PMIS weights).
inline std::uint64_t hash_mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic jitter in [0,1) for (seed, index) pairs.
inline double hash_unit(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t h = hash_mix(seed ^ hash_mix(index));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline DenseVector random_uniform(index_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseVector v(static_cast<std::size_t>(n));
    for (double& x : v) x = dist(gen);
    return v;
}

/// Random vector normalized to unit 2-norm.
DenseVector random_unit(index_t n, std::uint64_t seed);

} // namespace iluamg

#endif // ILUAMG_RNG_HPP
