#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace replan {

// mt19937_64's output sequence is fixed by the standard; everything below is
// derived from raw engine bits so results match across standard libraries.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive 64-bit seed mixing: mix_seed(s, a, b) = f(f(f(s) ^ a) ^ b).
constexpr std::uint64_t mix_seed(std::uint64_t base) noexcept { return splitmix64(base); }

template <typename... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t next, Rest... rest) noexcept {
  return mix_seed(splitmix64(base) ^ next, static_cast<std::uint64_t>(rest)...);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

/// Uniform integer in [0, n), n > 0 (multiply-shift, no modulo).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // High 64 bits of the 128-bit product rng() * n.
  const std::uint64_t x = rng();
  const std::uint64_t x_lo = x & 0xFFFFFFFFu, x_hi = x >> 32;
  const std::uint64_t n_lo = n & 0xFFFFFFFFu, n_hi = n >> 32;
  const std::uint64_t lo_lo = x_lo * n_lo;
  const std::uint64_t mid1 = x_hi * n_lo + (lo_lo >> 32);
  const std::uint64_t mid2 = x_lo * n_hi + (mid1 & 0xFFFFFFFFu);
  return x_hi * n_hi + (mid1 >> 32) + (mid2 >> 32);
}

/// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace replan
