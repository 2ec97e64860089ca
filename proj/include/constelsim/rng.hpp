#pragma once

#include <cstdint>
#include <random>

namespace constelsim {

/// Generator family used by every sampler.
using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent substream for one Monte Carlo trial.
///
/// The seed is a pure function of (master_seed, index), so a trial draws the
/// same randoms no matter which thread runs it or in which order.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
    const std::uint64_t a = splitmix64(master_seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632BE59BD9B4E019ull));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

/// Uniform double in [0, 1) with 53 random bits. Bit-reproducible for a given
/// engine state, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace constelsim
