#include "genequo/solver.hpp"

#include <algorithm>
#include <cmath>

#include "genequo/error.hpp"

namespace genequo {

double step_slack(double phi0) { return 1e-12 * std::max(1.0, phi0); }

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIterations:
      return "max-iterations";
    case SolveStatus::Stall:
      return "stall";
    case SolveStatus::LocalityExceeded:
      return "locality-exceeded";
  }
  return "unknown";
}

StepResult descent_step(const SetValuedMap& map, const Cone& cone, const Vector& x, const IncreaseCertificate& cert,
                        const SolverOptions& options, std::optional<double> phi0) {
  if (!(cert.a > 1.0)) throw PreconditionError("descent_step: certificate rate must exceed 1");
  const double r = phi(map, cone, x, options.excess).value;
  if (!(r > options.tol)) throw PreconditionError("descent_step: x is already feasible to tolerance");
  if (!cert.covers(x, r)) {
    throw LocalityExceeded("step radius " + std::to_string(r) + " leaves the certificate scope (delta " +
                           std::to_string(cert.delta) + ")");
  }
  const double target = std::max(0.0, 2.0 - cert.a) * r + step_slack(phi0.value_or(r));

  auto accept = [&](const Vector& u) -> std::optional<double> {
    if (!u.allFinite() || (u - x).norm() > r * (1.0 + 1e-12) || !map.box().contains(u)) return std::nullopt;
    const double value = phi(map, cone, u, options.excess).value;
    if (value <= target) return value;
    return std::nullopt;
  };

  if (cert.witness) {
    Vector u = cert.witness(x, r);
    if (auto value = accept(u)) return StepResult{std::move(u), r, *value, true};
  }
  const auto dirs = sphere_directions(map.domain_dim(), options.fallback_directions, options.seed);
  for (double frac : options.fallback_fractions) {
    for (const auto& d : dirs) {
      Vector u = x + frac * r * d;
      if (auto value = accept(u)) return StepResult{std::move(u), r, *value, false};
    }
  }
  throw Stall("no candidate within radius " + std::to_string(r) + " met the contraction target " +
              std::to_string(target));
}

SolveReport solve(const SetValuedMap& map, const Cone& cone, const Vector& x0, const IncreaseCertificate& cert,
                  const SolverOptions& options) {
  if (!(cert.a > 1.0)) throw PreconditionError("solve: certificate rate must exceed 1");
  if (!(options.tol > 0.0)) throw PreconditionError("solve: tol must be positive");
  SolveReport report;
  report.a = cert.a;
  Vector x = x0;
  double value = phi(map, cone, x, options.excess).value;
  report.phi_initial = value;
  while (value > options.tol) {
    if (report.iterations >= options.max_iter) {
      report.status = SolveStatus::MaxIterations;
      report.message = "iteration budget exhausted";
      break;
    }
    StepResult step;
    try {
      step = descent_step(map, cone, x, cert, options, report.phi_initial);
    } catch (const Stall& e) {
      report.status = SolveStatus::Stall;
      report.message = e.what();
      break;
    } catch (const LocalityExceeded& e) {
      report.status = SolveStatus::LocalityExceeded;
      report.message = e.what();
      break;
    }
    report.distance_traveled += (step.u - x).norm();
    report.trace.push_back({x, step.phi_x, step.u, step.phi_u, step.used_witness});
    x = step.u;
    value = step.phi_u;
    ++report.iterations;
  }
  report.solution = x;
  report.phi_final = value;
  report.bound_ratio = report.phi_initial > 0.0 ? report.distance_traveled * (cert.a - 1.0) / report.phi_initial : 0.0;
  return report;
}

SolvReference SolvReference::analytic(std::function<double(const Vector&)> distance) {
  if (!distance) throw PreconditionError("SolvReference::analytic needs a distance function");
  SolvReference ref;
  ref.distance_ = std::move(distance);
  return ref;
}

SolvReference SolvReference::sampled(std::vector<Vector> feasible_points) {
  SolvReference ref;
  ref.points_ = std::move(feasible_points);
  return ref;
}

double SolvReference::distance(const Vector& x) const {
  if (distance_) return distance_(x);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points_) best = std::min(best, (x - p).norm());
  return best;
}

std::vector<BoundCheck> verify_global_error_bound(const SetValuedMap& map, const Cone& cone, double a,
                                                  const std::vector<Vector>& samples, const SolvReference& reference,
                                                  double eps, const ExcessOptions& excess) {
  if (!(a > 1.0)) throw PreconditionError("verify_global_error_bound: a must exceed 1");
  std::vector<BoundCheck> checks;
  checks.reserve(samples.size());
  for (const auto& x : samples) {
    BoundCheck c;
    c.x = x;
    c.phi = phi(map, cone, x, excess).value;
    c.lhs = reference.distance(x);
    c.rhs = c.phi / (a - 1.0);
    c.satisfied = c.lhs <= c.rhs + eps;
    checks.push_back(std::move(c));
  }
  return checks;
}

std::size_t count_violations(const std::vector<BoundCheck>& checks) {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.satisfied; }));
}

LocalBoundReport verify_local_error_bound(const SetValuedMap& map, const Cone& cone, const Vector& center, double a,
                                          const SolvReference& reference, const LocalBoundOptions& options,
                                          const ExcessOptions& excess) {
  if (!(a > 1.0)) throw PreconditionError("verify_local_error_bound: a must exceed 1");
  if (!(options.shrink > 0.0 && options.shrink < 1.0)) throw PreconditionError("shrink factor must lie in (0, 1)");
  if (!phi(map, cone, center, excess).feasible()) {
    throw PreconditionError("verify_local_error_bound: the center is not feasible");
  }
  // Fixed offsets in the unit ball, rescaled per radius.
  Rng rng(options.seed);
  std::vector<Vector> offsets{Vector::Zero(center.size())};
  for (int i = 0; i < options.samples; ++i) offsets.push_back(rng.in_ball(Vector::Zero(center.size()), 1.0));

  LocalBoundReport report;
  for (double radius = options.initial_radius; radius >= options.min_radius; radius *= options.shrink) {
    std::vector<Vector> points;
    for (const auto& o : offsets) {
      Vector x = center + radius * o;
      if (map.box().contains(x)) points.push_back(std::move(x));
    }
    auto checks = verify_global_error_bound(map, cone, a, points, reference, options.eps, excess);
    if (count_violations(checks) == 0) {
      report.radius = radius;
      report.confirmed = true;
      report.checks = std::move(checks);
      return report;
    }
    ++report.shrinks;
    report.checks = std::move(checks);
  }
  return report;
}

std::vector<Vector> SolutionProbe::feasible_points() const {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (mask[i]) out.push_back(points[i]);
  }
  return out;
}

SolutionProbe solution_set_probe(const SetValuedMap& map, const Cone& cone, const Vector& lower, const Vector& upper,
                                 const std::vector<int>& counts, double eps, const ExcessOptions& excess) {
  SolutionProbe probe;
  probe.points = tensor_grid(lower, upper, counts);
  probe.phi.reserve(probe.points.size());
  probe.mask.reserve(probe.points.size());
  for (const auto& x : probe.points) {
    if (!map.box().contains(x)) {
      probe.phi.push_back(std::numeric_limits<double>::infinity());
      probe.mask.push_back(false);
      continue;
    }
    const double value = phi(map, cone, x, excess).value;
    probe.phi.push_back(value);
    probe.mask.push_back(value <= eps);
  }
  return probe;
}

}  // namespace genequo
