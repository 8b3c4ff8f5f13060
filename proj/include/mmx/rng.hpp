#pragma once

#include <cmath>
#include <cstdint>

namespace mmx {

// Counter-based generator (splitmix64 stream evaluated at an offset).
// draw k of stream `seed` is a pure function of (seed, k), so stochastic
// schedules and fuzz trials can be materialized in any order or in parallel
// and still reproduce bit-identically.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derive an independent stream seed, e.g. per trial or per pair index.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ 0xD1B54A32D192ED03ull, index);
}

// Uniform on the open interval (0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return (static_cast<double>(mix64(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform on (-1, 1).
inline double uniform_sym(std::uint64_t seed, std::uint64_t counter) {
  return 2.0 * uniform01(seed, counter) - 1.0;
}

// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
inline double normal01(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = uniform01(seed, 2 * counter);
  const double u2 = uniform01(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace mmx
