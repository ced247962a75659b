#pragma once

// Deterministic randomness utilities. Every stochastic feature takes one
// user-provided seed and derives independent streams from it, so identical
// seeds give identical corpora, traces, and reports on every platform.

#include <cmath>
#include <cstdint>
#include <random>

namespace more {

// splitmix64 step; used only to spread user seeds into stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream k of a master seed. Streams are independent for practical purposes
// and stable across runs.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9E3779B97F4A7C15ULL + 1));
}

// Uniform double in [0, 1) using the top 53 bits; avoids the
// implementation-defined behavior of std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& g) {
  return double(g() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on explicit uniforms, again to stay
// deterministic across standard libraries.
inline double normal01(std::mt19937_64& g) {
  double u1 = uniform01(g);
  double u2 = uniform01(g);
  while (u1 <= 0.0) u1 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

// Poisson sample by CDF inversion; adequate for the small match-score rates
// used here. Capped to keep pathological uniforms finite.
inline int poisson(std::mt19937_64& g, double lambda) {
  const double u = uniform01(g);
  double p = std::exp(-lambda);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 50) {
    ++k;
    p *= lambda / double(k);
    cdf += p;
  }
  return k;
}

}  // namespace more
