#pragma once

#include <cstdint>
#include <random>

namespace stlflow {

using Rng = std::mt19937_64;

inline double uniform(Rng &rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng &rng, int lo, int hi) {  // inclusive bounds
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double gaussian(Rng &rng, double mean = 0.0, double std = 1.0) {
  return std::normal_distribution<double>(mean, std)(rng);
}

}  // namespace stlflow
