#include "genequo/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "genequo/error.hpp"

namespace genequo {

namespace {

std::vector<int> grid_counts(const Vector& lower, const Vector& upper, double resolution) {
  std::vector<int> counts;
  double total = 1.0;
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    const double width = upper[i] - lower[i];
    const int c = width > 0.0 ? static_cast<int>(std::floor(width / resolution + 1e-9)) + 1 : 1;
    counts.push_back(c);
    total *= c;
  }
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw PreconditionError("grid of " + std::to_string(static_cast<long long>(total)) +
                            " points is too large; coarsen the resolution");
  }
  return counts;
}

}  // namespace

double penalty_value(const ConstrainedProblem& problem, double lambda, const Vector& x, const ExcessOptions& excess) {
  if (!(lambda >= 0.0)) throw PreconditionError("penalty parameter must be nonnegative");
  const double f = problem.objective(x);
  if (lambda == 0.0) return f;
  return f + lambda * phi(problem.map, problem.cone, x, excess).value;
}

double lipschitz_estimate(const ScalarFunction& objective, const Vector& center, double radius, int pairs,
                          std::uint64_t seed) {
  if (!(radius > 0.0)) throw PreconditionError("lipschitz_estimate: radius must be positive");
  Rng rng(seed);
  double best = 0.0;
  auto update = [&](const Vector& p, const Vector& q) {
    const double d = (p - q).norm();
    if (d > 1e-12 * radius) best = std::max(best, std::abs(objective(p) - objective(q)) / d);
  };
  for (const auto& d : sphere_directions(static_cast<int>(center.size()), 64, seed)) {
    update(center, center + radius * d);
    update(center - radius * d, center + radius * d);
  }
  for (int i = 0; i < pairs; ++i) {
    update(rng.in_ball(center, radius), rng.in_ball(center, radius));
  }
  return best;
}

double penalty_threshold(double beta, double a) {
  if (!(a > 1.0)) throw PreconditionError("penalty_threshold: a must exceed 1");
  if (!(beta >= 0.0)) throw PreconditionError("penalty_threshold: beta must be nonnegative");
  return beta / (a - 1.0);
}

double recommended_lambda(double beta, double a, double safety) { return safety * penalty_threshold(beta, a); }

double grid_slack(double value) { return 1e-9 * (1.0 + std::abs(value)); }

PenaltyVerdict exactness_experiment(const ConstrainedProblem& problem, double lambda, double search_radius,
                                    double resolution, std::optional<double> threshold, const ExcessOptions& excess) {
  if (!problem.solution) throw PreconditionError("exactness_experiment needs a known solution x̄");
  if (!(search_radius > 0.0) || !(resolution > 0.0)) {
    throw PreconditionError("exactness_experiment: radius and resolution must be positive");
  }
  const Vector& center = *problem.solution;
  if (!phi(problem.map, problem.cone, center, excess).feasible()) {
    throw PreconditionError("exactness_experiment: x̄ is not feasible");
  }
  const DomainBox& box = problem.map.box();
  auto value = [&](const Vector& x) { return penalty_value(problem, lambda, x, excess); };
  auto admissible = [&](const Vector& x) { return (x - center).norm() <= search_radius * (1.0 + 1e-12) && box.contains(x); };

  PenaltyVerdict v;
  v.lambda = lambda;
  v.threshold = threshold;
  v.resolution = resolution;
  v.value_at_solution = value(center);
  v.minimizer = center;
  v.min_value = v.value_at_solution;

  // Grid aligned on x̄ so that x̄ itself is a node.
  const Vector lower = center.array() - search_radius;
  const Vector upper = center.array() + search_radius;
  grid_counts(lower, upper, resolution);  // size guard
  const int k = static_cast<int>(std::floor(search_radius / resolution + 1e-9));
  std::vector<int> idx(center.size(), -k);
  bool done = center.size() == 0;
  while (!done) {
    Vector x(center.size());
    for (Eigen::Index i = 0; i < center.size(); ++i) x[i] = center[i] + idx[i] * resolution;
    if (admissible(x)) {
      ++v.grid_points;
      const double fx = value(x);
      if (fx < v.min_value) {
        v.min_value = fx;
        v.minimizer = x;
      }
    }
    std::size_t axis = idx.size();
    while (axis-- > 0) {
      if (++idx[axis] <= k) break;
      idx[axis] = -k;
      if (axis == 0) done = true;
    }
  }

  // Compass search from the best grid point.
  double step = 0.5 * resolution;
  while (step > 1e-6 * resolution) {
    bool moved = false;
    for (Eigen::Index i = 0; i < center.size() && !moved; ++i) {
      for (double sign : {1.0, -1.0}) {
        Vector x = v.minimizer;
        x[i] += sign * step;
        if (!admissible(x)) continue;
        const double fx = value(x);
        if (fx < v.min_value) {
          v.min_value = fx;
          v.minimizer = x;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }

  v.margin = v.min_value - v.value_at_solution;
  v.is_exact = v.value_at_solution <= v.min_value + grid_slack(v.value_at_solution);
  if (threshold) v.threshold_boundary = std::abs(lambda - *threshold) <= 1e-9 * std::max(1.0, *threshold);
  return v;
}

std::string to_string(StrictOutcome outcome) {
  switch (outcome) {
    case StrictOutcome::Solves:
      return "solves";
    case StrictOutcome::Infeasible:
      return "infeasible";
    case StrictOutcome::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

StrictGlobalResult strict_global_check(const ConstrainedProblem& problem, double epsilon, double beta, double a,
                                       const Vector& lower, const Vector& upper, double resolution,
                                       const ExcessOptions& excess) {
  if (!(epsilon > 0.0)) throw PreconditionError("strict_global_check: epsilon must be positive");
  if (!(resolution > 0.0)) throw PreconditionError("strict_global_check: resolution must be positive");
  StrictGlobalResult out;
  out.lambda = (1.0 + epsilon) * penalty_threshold(beta, a);
  const auto grid = tensor_grid(lower, upper, grid_counts(lower, upper, resolution));

  std::vector<double> values;
  std::vector<double> residuals;
  values.reserve(grid.size());
  residuals.reserve(grid.size());
  std::size_t best = 0;
  out.feasible_grid_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector& x = grid[i];
    if (!problem.map.box().contains(x)) {
      values.push_back(std::numeric_limits<double>::infinity());
      residuals.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const double f = problem.objective(x);
    const double r = phi(problem.map, problem.cone, x, excess).value;
    values.push_back(f + out.lambda * r);
    residuals.push_back(r);
    if (r <= kFeasibilityTolerance) out.feasible_grid_min = std::min(out.feasible_grid_min, f);
    if (values.back() < values[best]) best = i;
  }
  out.grid_points = grid.size();
  out.minimizer = grid[best];
  out.min_value = values[best];
  out.phi_at_minimizer = residuals[best];
  const double slack = grid_slack(out.min_value);
  const auto ties =
      std::count_if(values.begin(), values.end(), [&](double v) { return v <= out.min_value + slack; });
  out.strict = ties == 1;
  out.feasible = out.phi_at_minimizer <= kFeasibilityTolerance;
  out.objective_gap = problem.objective(out.minimizer) - out.feasible_grid_min;
  if (!out.strict) out.outcome = StrictOutcome::Inconclusive;
  else if (!out.feasible) out.outcome = StrictOutcome::Infeasible;
  else if (out.objective_gap <= grid_slack(out.feasible_grid_min)) out.outcome = StrictOutcome::Solves;
  else out.outcome = StrictOutcome::Inconclusive;
  return out;
}

}  // namespace genequo
