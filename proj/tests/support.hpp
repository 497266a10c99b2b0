#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "ac2cd/problem.hpp"

namespace testing_support {

using ac2cd::Index;
using ac2cd::Vector;

// Projection onto {x >= 0, sum x = 1} by bisection on the shift. Written
// independently of the library's sort-based routine so the two can be
// compared.
inline Vector simplex_projection_bisect(const Vector& c) {
  double lo = c.minCoeff() - 1.0;
  double hi = c.maxCoeff();
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = (c.array() - mid).max(0.0).sum();
    if (s > 1.0) lo = mid;
    else hi = mid;
  }
  return (c.array() - 0.5 * (lo + hi)).max(0.0).matrix();
}

inline Vector random_vector(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  return (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace testing_support
