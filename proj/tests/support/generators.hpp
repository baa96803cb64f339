#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <vector>

#include "genequo/geometry.hpp"

namespace gen {

using genequo::Matrix;
using genequo::Rng;
using genequo::Vector;

inline Vector uniform_vector(Rng& rng, int dim, double lo, double hi) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

/// A point with at least one negative coordinate, so outside R^m_+.
inline Vector outside_orthant(Rng& rng, int dim, double scale) {
  Vector v = uniform_vector(rng, dim, -scale, scale);
  const auto k = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(dim)));
  v[k] = -rng.uniform(0.05, 1.0) * scale;
  return v;
}

inline Vector in_orthant(Rng& rng, int dim, double scale) { return uniform_vector(rng, dim, 0.0, scale); }

inline std::vector<Vector> cloud(Rng& rng, int dim, int count, double scale) {
  std::vector<Vector> pts;
  for (int i = 0; i < count; ++i) pts.push_back(uniform_vector(rng, dim, -scale, scale));
  return pts;
}

inline Matrix uniform_matrix(Rng& rng, int rows, int cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

/// Log-uniform in [lo, hi].
inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

inline int pick(Rng& rng, const std::vector<int>& options) { return options[rng.index(options.size())]; }

}  // namespace gen
