#pragma once

// Ideal efficient points of f over a finite feasible sample R: x̄ with
// f(R) ⊆ f(x̄) + C, i.e. the solutions of F(x) = f(R) - f(x) ⊆ C.

#include <optional>
#include <vector>

#include "genequo/increase.hpp"

namespace genequo {

struct VectorProblem {
  VectorFunction f;
  std::vector<Vector> feasible;
  Cone cone;
};

/// The map x ↦ f(R) - f(x).
SetValuedMap ideal_map(const VectorProblem& problem);

/// max over z in R of dist(f(z) - f(x), C); zero exactly at ideal points.
double ideal_residual(const VectorProblem& problem, const Vector& x);

struct IdealBoundCheck {
  std::size_t index = 0;
  double residual = 0.0;
  double distance = 0.0;  // to the nearest ideal point
  double bound = 0.0;     // residual / (a - 1)
  bool satisfied = true;
};

struct IdealReport {
  std::vector<std::size_t> ideal_indices;
  std::vector<double> residuals;  // one per point of R
  std::optional<double> rate;
  std::vector<IdealBoundCheck> checks;
  /// A rate was supplied but no ideal point exists: the hypotheses behind the
  /// bound fail on this data.
  bool hypothesis_failed = false;
  bool pointed = false;
  /// With a pointed cone all ideal points share one image (to 1e-9).
  bool unique_value = true;

  bool empty() const noexcept { return ideal_indices.empty(); }
};

/// Brute-force scan of R. With a rate a > 1 for -f on R, also checks
/// dist(x, ideal set) <= residual(x) / (a - 1) + eps for every x in R.
IdealReport ideal_efficient_set(const VectorProblem& problem, std::optional<double> rate = std::nullopt,
                                double eps = kFeasibilityTolerance);

/// True when no z in R has f(x̄) - f(z) in C \ (-C). Throws PreconditionError
/// when x̄ is not ideal.
bool pareto_cross_check(const VectorProblem& problem, const Vector& x, double eps = kFeasibilityTolerance);

struct DiscreteIncreaseCheck {
  int pairs = 0;
  int certified = 0;
  int refuted = 0;
  int inconclusive = 0;
};

/// Checks the increase inclusion for -f at sampled (x, r) with x and the
/// candidates u drawn from R only, since R is the whole (discrete) domain.
DiscreteIncreaseCheck discrete_increase_check(const VectorProblem& problem, double a, int pairs = 100,
                                              std::uint64_t seed = kDefaultSeed);

}  // namespace genequo
