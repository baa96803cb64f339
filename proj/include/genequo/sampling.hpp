#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace genequo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Deterministic random source. The engine sequence is fixed by the standard;
/// the real-valued conversions are done here so reruns are bit-identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  Vector unit_vector(int dim);
  /// Uniform in the closed ball B(center, radius).
  Vector in_ball(const Vector& center, double radius);
  Vector in_box(const Vector& lower, const Vector& upper);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Low-discrepancy unit directions in R^dim, always including the 2*dim signed
/// coordinate axes. dim == 1 yields exactly {+1, -1}; dim == 2 an evenly spaced
/// angular lattice whose size is rounded up to a multiple of 4; higher
/// dimensions the axes followed by a shifted Halton sequence pushed through the
/// inverse normal CDF.
std::vector<Vector> sphere_directions(int dim, int count, std::uint64_t seed = kDefaultSeed);

/// Points of B(center, radius): the center, the sphere of each radius in
/// `fractions` (scaled by radius) sampled along `directions`.
std::vector<Vector> ball_points(const Vector& center, double radius, const std::vector<Vector>& directions,
                                const std::vector<double>& fractions);

/// Tensor grid with `counts[i]` points per axis, endpoints included. Row-major
/// with the last axis fastest.
std::vector<Vector> tensor_grid(const Vector& lower, const Vector& upper, const std::vector<int>& counts);

}  // namespace genequo
