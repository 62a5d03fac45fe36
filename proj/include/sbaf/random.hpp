// random.hpp: seeded draws built directly on mt19937_64 output so streams do not
// depend on the standard library's distribution implementations.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sbafnet {

/// Uniform in [0, 1) from the top 53 bits of the engine output.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

/// Standard normal via Box-Muller, cosine branch only.
inline double normal_unit(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform_unit(rng);  // in (0, 1], keeps the log finite
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// In-place Fisher-Yates shuffle.
inline void shuffle_indices(std::vector<int>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace sbafnet
