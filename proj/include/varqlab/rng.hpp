#pragma once

#include <cstdint>
#include <random>

namespace varqlab {

// All randomness in the library flows through std::mt19937_64 plus the two
// helpers below. The raw engine output is fully specified by the standard and
// the derivations here avoid std::*_distribution, whose algorithms are
// implementation-defined, so seeded results are stable across compilers and
// releases.

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double rand_u01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) via the multiply-shift reduction.
inline std::uint64_t rand_index(Rng& rng, std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

// Decorrelates seeds derived from a base seed plus a small stream index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace varqlab
