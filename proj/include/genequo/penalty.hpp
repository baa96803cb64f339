#pragma once

// Exact penalization of min φ(x) s.t. F(x) ⊆ C via φ_λ = φ + λ exc(F(x), C):
// thresholds and grid-based exactness verdicts.

#include <optional>
#include <string>
#include <vector>

#include "genequo/mappings.hpp"

namespace genequo {

inline constexpr double kDefaultSafetyFactor = 1.25;
inline constexpr std::size_t kMaxGridPoints = 4'000'000;

struct ConstrainedProblem {
  ScalarFunction objective;
  SetValuedMap map;
  Cone cone;
  /// Known local solution x̄, when available.
  std::optional<Vector> solution;
};

/// objective(x) + λ φ(x).
double penalty_value(const ConstrainedProblem& problem, double lambda, const Vector& x,
                     const ExcessOptions& excess = {});

/// max |Δφ| / d over sampled pairs in B(x̄, radius): a lower estimate of the
/// local Lipschitz bound.
double lipschitz_estimate(const ScalarFunction& objective, const Vector& center, double radius, int pairs = 2000,
                          std::uint64_t seed = kDefaultSeed);

/// β / (a - 1). Throws PreconditionError when a <= 1 or β < 0.
double penalty_threshold(double beta, double a);

/// Threshold times a safety factor, for use with an estimated β.
double recommended_lambda(double beta, double a, double safety = kDefaultSafetyFactor);

struct PenaltyVerdict {
  double lambda = 0.0;
  std::optional<double> threshold;
  bool is_exact = false;
  /// Best point found by the grid and the pattern search.
  Vector minimizer;
  double min_value = 0.0;
  double value_at_solution = 0.0;
  /// min_value - φ_λ(x̄); negative when the search beat x̄.
  double margin = 0.0;
  double resolution = 0.0;
  std::size_t grid_points = 0;
  /// λ equals the threshold to rounding; the theorem says nothing there.
  bool threshold_boundary = false;
};

/// 1e-9 (1 + |value|).
double grid_slack(double value);

/// Grid over B(x̄, radius) ∩ box at the given spacing plus a compass search
/// from the best grid point. Exact when φ_λ(x̄) <= min + grid_slack. Throws
/// PreconditionError when x̄ is missing or infeasible.
PenaltyVerdict exactness_experiment(const ConstrainedProblem& problem, double lambda, double search_radius,
                                    double resolution, std::optional<double> threshold = std::nullopt,
                                    const ExcessOptions& excess = {});

enum class StrictOutcome { Solves, Infeasible, Inconclusive };

std::string to_string(StrictOutcome outcome);

struct StrictGlobalResult {
  double lambda = 0.0;
  Vector minimizer;
  double min_value = 0.0;
  double phi_at_minimizer = 0.0;
  /// A unique grid point attains the minimum with margin above grid_slack.
  bool strict = false;
  bool feasible = false;
  /// Smallest objective over feasible grid points (+inf if none).
  double feasible_grid_min = 0.0;
  double objective_gap = 0.0;
  std::size_t grid_points = 0;
  StrictOutcome outcome = StrictOutcome::Inconclusive;
};

/// Minimizes φ_λ with λ = (1 + ε) β / (a - 1) over the grid of [lower, upper]
/// and reports whether the minimizer is strict, feasible and optimal among the
/// feasible grid points.
StrictGlobalResult strict_global_check(const ConstrainedProblem& problem, double epsilon, double beta, double a,
                                       const Vector& lower, const Vector& upper, double resolution,
                                       const ExcessOptions& excess = {});

}  // namespace genequo
