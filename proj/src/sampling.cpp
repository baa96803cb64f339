#include "genequo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "genequo/error.hpp"

namespace genequo {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector Rng::unit_vector(int dim) {
  Vector v(dim);
  double norm = 0.0;
  while (norm < 1e-12) {
    for (int i = 0; i < dim; ++i) v[i] = normal();
    norm = v.norm();
  }
  return v / norm;
}

Vector Rng::in_ball(const Vector& center, double radius) {
  const int dim = static_cast<int>(center.size());
  const double scale = radius * std::pow(uniform(), 1.0 / dim);
  return center + scale * unit_vector(dim);
}

Vector Rng::in_box(const Vector& lower, const Vector& upper) {
  Vector v(lower.size());
  for (Eigen::Index i = 0; i < lower.size(); ++i) v[i] = uniform(lower[i], upper[i]);
  return v;
}

namespace {

double radical_inverse(std::uint64_t index, int base) {
  double inv_base = 1.0 / base;
  double factor = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return result;
}

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int candidate = 2; static_cast<int>(primes.size()) < count; ++candidate) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

}  // namespace

std::vector<Vector> sphere_directions(int dim, int count, std::uint64_t seed) {
  if (dim < 1) throw PreconditionError("sphere_directions: dimension must be positive");
  std::vector<Vector> dirs;
  if (dim == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  if (dim == 2) {
    const int n = (std::max(count, 4) + 3) / 4 * 4;
    dirs.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / n;
      Vector v(2);
      v << std::cos(angle), std::sin(angle);
      dirs.push_back(v);
    }
    return dirs;
  }

  for (int i = 0; i < dim; ++i) {
    Vector e = Vector::Zero(dim);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  const auto primes = first_primes(dim);
  Rng rng(seed);
  std::vector<double> shift(dim);
  for (auto& s : shift) s = rng.uniform();

  for (std::uint64_t k = 1; static_cast<int>(dirs.size()) < count; ++k) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
      double u = radical_inverse(k, primes[i]) + shift[i];
      u -= std::floor(u);
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      v[i] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
    }
    const double norm = v.norm();
    if (norm > 1e-12) dirs.push_back(v / norm);
  }
  return dirs;
}

std::vector<Vector> ball_points(const Vector& center, double radius, const std::vector<Vector>& directions,
                                const std::vector<double>& fractions) {
  std::vector<Vector> points;
  points.reserve(1 + directions.size() * fractions.size());
  points.push_back(center);
  for (double f : fractions) {
    for (const auto& d : directions) points.push_back(center + (f * radius) * d);
  }
  return points;
}

std::vector<Vector> tensor_grid(const Vector& lower, const Vector& upper, const std::vector<int>& counts) {
  const auto dim = static_cast<std::size_t>(lower.size());
  if (counts.size() != dim || static_cast<std::size_t>(upper.size()) != dim) {
    throw DimensionMismatch("tensor_grid", static_cast<long>(dim), static_cast<long>(counts.size()));
  }
  std::size_t total = 1;
  for (int c : counts) {
    if (c < 1) throw PreconditionError("tensor_grid: every axis needs at least one point");
    total *= static_cast<std::size_t>(c);
  }
  std::vector<Vector> points;
  points.reserve(total);
  std::vector<int> idx(dim, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Vector p(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      p[ii] = counts[i] == 1 ? 0.5 * (lower[ii] + upper[ii])
                             : lower[ii] + (upper[ii] - lower[ii]) * idx[i] / (counts[i] - 1);
    }
    points.push_back(std::move(p));
    for (std::size_t i = dim; i-- > 0;) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
  }
  return points;
}

}  // namespace genequo
