#pragma once

#include <cstdint>
#include <random>

namespace stalloc {

// All randomness in the library derives from std::mt19937_64 seeded directly
// with the user seed, consumed through the two helpers below. The derivations
// are spelled out (rather than using std::*_distribution) so that identical
// seeds give identical samples on any conforming standard library.

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Poisson count with the given mean, via unit-exponential inter-arrival
// sums. O(mean) draws; stable for large means where the classic
// product-of-uniforms method underflows.
inline std::int64_t poisson_count(double mean, std::mt19937_64& rng) {
  if (!(mean > 0.0)) return 0;
  std::int64_t n = 0;
  double t = -std::log1p(-uniform53(rng));
  while (t <= mean) {
    ++n;
    t += -std::log1p(-uniform53(rng));
  }
  return n;
}

}  // namespace stalloc
