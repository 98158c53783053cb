#pragma once

#include <cstdint>
#include <random>

namespace jobroute::rng {

// All randomness in the project funnels through mt19937_64 plus the manual
// mappings below. The engine's output sequence is fixed by the standard and
// the mappings avoid std distributions, whose results vary across standard
// library implementations, so seeded runs replay bit-exactly everywhere.
using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed derivation for nested runs, e.g. mix(master_seed, k, cell_seed).
constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

// Uniform double in [lo, hi); degenerate ranges (lo == hi) return lo.
inline double uniform_real(Engine& eng, double lo, double hi) {
  const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Uniform integer in [0, n). Modulo bias is negligible for n far below 2^64
// and the result is identical on every platform, which is what matters here.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
  return eng() % n;
}

} // namespace jobroute::rng
