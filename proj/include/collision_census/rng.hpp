#pragma once

#include <cstdint>
#include <random>

namespace census {

/// Engine used by every simulator. Each trial/stream owns its own instance.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`: mix64(mix64(master) + index).
/// Trial k of any experiment uses derive_seed(master, k).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) + index);
}

/// Uniform integer in [0, n) from exactly one 64-bit draw (multiply-high).
/// The bias is below n / 2^64 and is ignored.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Fair coin from one draw (top bit).
inline bool fair_coin(Rng& rng) noexcept { return (rng() >> 63) != 0; }

/// Uniform double in [0, 1) from one draw (53 high bits).
inline double uniform_unit(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace census
