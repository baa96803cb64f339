#include "genequo/vecopt.hpp"

#include <algorithm>
#include <cmath>

#include "genequo/error.hpp"

namespace genequo {

namespace {

void validate(const VectorProblem& problem) {
  if (problem.feasible.empty()) throw PreconditionError("vector problem needs a nonempty feasible sample");
  if (!problem.f) throw PreconditionError("vector problem needs an objective map");
}

}  // namespace

SetValuedMap ideal_map(const VectorProblem& problem) {
  validate(problem);
  return image_shift(problem.f, problem.feasible, problem.cone.dim());
}

double ideal_residual(const VectorProblem& problem, const Vector& x) {
  validate(problem);
  const Vector fx = problem.f(x);
  if (fx.size() != problem.cone.dim()) throw DimensionMismatch("ideal_residual", problem.cone.dim(), fx.size());
  double worst = 0.0;
  for (const auto& z : problem.feasible) worst = std::max(worst, dist_to_cone(problem.f(z) - fx, problem.cone));
  return worst;
}

IdealReport ideal_efficient_set(const VectorProblem& problem, std::optional<double> rate, double eps) {
  validate(problem);
  if (rate && !(*rate > 1.0)) throw PreconditionError("ideal_efficient_set: rate must exceed 1");
  IdealReport report;
  report.rate = rate;
  report.pointed = problem.cone.is_pointed();

  std::vector<Vector> images;
  images.reserve(problem.feasible.size());
  for (const auto& z : problem.feasible) images.push_back(problem.f(z));
  for (std::size_t i = 0; i < images.size(); ++i) {
    double worst = 0.0;
    for (const auto& fz : images) worst = std::max(worst, dist_to_cone(fz - images[i], problem.cone));
    report.residuals.push_back(worst);
    if (worst <= eps) report.ideal_indices.push_back(i);
  }

  if (report.pointed && report.ideal_indices.size() > 1) {
    const Vector& ref = images[report.ideal_indices.front()];
    for (auto i : report.ideal_indices) {
      if ((images[i] - ref).norm() > 1e-9 * (1.0 + ref.norm())) report.unique_value = false;
    }
  }

  if (rate) {
    if (report.empty()) {
      report.hypothesis_failed = true;
      return report;
    }
    for (std::size_t i = 0; i < problem.feasible.size(); ++i) {
      IdealBoundCheck c;
      c.index = i;
      c.residual = report.residuals[i];
      c.distance = std::numeric_limits<double>::infinity();
      for (auto j : report.ideal_indices) {
        c.distance = std::min(c.distance, (problem.feasible[i] - problem.feasible[j]).norm());
      }
      c.bound = c.residual / (*rate - 1.0);
      c.satisfied = c.distance <= c.bound + eps;
      report.checks.push_back(c);
    }
  }
  return report;
}

bool pareto_cross_check(const VectorProblem& problem, const Vector& x, double eps) {
  if (ideal_residual(problem, x) > eps) throw PreconditionError("pareto_cross_check: the point is not ideal");
  const Vector fx = problem.f(x);
  for (const auto& z : problem.feasible) {
    const Vector d = fx - problem.f(z);
    const double tol = 1e-9 * (1.0 + d.norm());
    if (problem.cone.contains(d, tol) && !problem.cone.contains(-d, tol)) return false;
  }
  return true;
}

DiscreteIncreaseCheck discrete_increase_check(const VectorProblem& problem, double a, int pairs, std::uint64_t seed) {
  validate(problem);
  const int n = static_cast<int>(problem.feasible.front().size());
  const int m = problem.cone.dim();
  const VectorFunction f = problem.f;
  const SetValuedMap neg = single_valued([f](const Vector& x) -> Vector { return -f(x); }, n, m, "-f");

  double diameter = 0.0;
  for (const auto& p : problem.feasible) {
    for (const auto& q : problem.feasible) diameter = std::max(diameter, (p - q).norm());
  }
  DiscreteIncreaseCheck out;
  if (diameter == 0.0) return out;

  InclusionOptions options;
  options.mode = CandidateMode::Sampled;
  options.candidates = problem.feasible;
  options.seed = seed;
  Rng rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const Vector& x = problem.feasible[rng.index(problem.feasible.size())];
    const double r = diameter * std::pow(10.0, rng.uniform(-2.0, 0.0));
    switch (check_increase_inclusion(neg, problem.cone, x, r, a, options).verdict) {
      case Verdict::Certified:
        ++out.certified;
        break;
      case Verdict::Refuted:
        ++out.refuted;
        break;
      case Verdict::Inconclusive:
        ++out.inconclusive;
        break;
    }
    ++out.pairs;
  }
  return out;
}

}  // namespace genequo
