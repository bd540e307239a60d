#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace strokelab {

/// All randomness in the library flows through seeded mt19937_64 engines so
/// that a (seed, input) pair reproduces bit-identical results on a platform.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Derive an independent stream for a sub-task (per fold, per member, ...).
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<unsigned>(seed), static_cast<unsigned>(seed >> 32),
                      static_cast<unsigned>(stream ^ 0x9e3779b9U),
                      static_cast<unsigned>(stream >> 32)};
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

}  // namespace strokelab
