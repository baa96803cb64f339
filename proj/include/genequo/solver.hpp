#pragma once

// Descent solver for F(x) ⊆ C: each step moves by r = φ(x) to a point whose
// residual contracts by max(0, 2 - a). Also error-bound verification against a
// reference description of the solution set.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genequo/increase.hpp"

namespace genequo {

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 1000;
  double eps_feas = kFeasibilityTolerance;
  /// Fallback search when the witness is missing or fails: u = x + f r d over
  /// these sphere directions and fractions f.
  int fallback_directions = 256;
  std::vector<double> fallback_fractions{1.0, 0.5, 0.25};
  std::uint64_t seed = kDefaultSeed;
  ExcessOptions excess;
};

/// 1e-12 max(1, φ0).
double step_slack(double phi0);

struct StepResult {
  Vector u;
  double phi_x = 0.0;
  double phi_u = 0.0;
  bool used_witness = false;
};

/// One step from x with r = φ(x): returns u with d(u, x) <= r and
/// φ(u) <= max(0, 2 - a) φ(x) + slack. `phi0` sets the slack scale (defaults to
/// φ(x)). Throws PreconditionError when φ(x) <= tol, LocalityExceeded when the
/// step leaves a local certificate's scope and Stall when no candidate
/// contracts.
StepResult descent_step(const SetValuedMap& map, const Cone& cone, const Vector& x, const IncreaseCertificate& cert,
                        const SolverOptions& options = {}, std::optional<double> phi0 = std::nullopt);

enum class SolveStatus { Converged, MaxIterations, Stall, LocalityExceeded };

std::string to_string(SolveStatus status);

struct TraceEntry {
  Vector x;
  double phi_x;
  Vector u;
  double phi_u;
  bool used_witness;
};

struct SolveReport {
  Vector solution;
  double phi_initial = 0.0;
  double phi_final = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  double distance_traveled = 0.0;
  /// distance_traveled (a - 1) / φ(x0); at most 1 up to slack on success.
  double bound_ratio = 0.0;
  double a = 1.0;
  SolveStatus status = SolveStatus::Converged;
  std::string message;

  bool converged() const noexcept { return status == SolveStatus::Converged; }
};

SolveReport solve(const SetValuedMap& map, const Cone& cone, const Vector& x0, const IncreaseCertificate& cert,
                  const SolverOptions& options = {});

/// Reference for dist(x, Solv): an analytic distance, or a finite feasible
/// sample (whose distance is an upper bound on the true one).
class SolvReference {
 public:
  static SolvReference analytic(std::function<double(const Vector&)> distance);
  static SolvReference sampled(std::vector<Vector> feasible_points);

  double distance(const Vector& x) const;
  bool exact() const noexcept { return static_cast<bool>(distance_); }
  const std::vector<Vector>& points() const noexcept { return points_; }

 private:
  std::function<double(const Vector&)> distance_;
  std::vector<Vector> points_;
};

struct BoundCheck {
  Vector x;
  double phi = 0.0;
  double lhs = 0.0;  // dist(x, Solv)
  double rhs = 0.0;  // φ(x) / (a - 1)
  bool satisfied = true;
};

/// dist(x, Solv) <= φ(x) / (a - 1) + eps at each sample.
std::vector<BoundCheck> verify_global_error_bound(const SetValuedMap& map, const Cone& cone, double a,
                                                  const std::vector<Vector>& samples, const SolvReference& reference,
                                                  double eps = kFeasibilityTolerance,
                                                  const ExcessOptions& excess = {});

std::size_t count_violations(const std::vector<BoundCheck>& checks);

struct LocalBoundOptions {
  double initial_radius = 1.0;
  double shrink = 0.5;
  double min_radius = 1e-8;
  int samples = 200;
  double eps = 1e-9;
  std::uint64_t seed = kDefaultSeed;
};

struct LocalBoundReport {
  double radius = 0.0;
  /// False when the radius fell below min_radius: a diagnostic, not a disproof.
  bool confirmed = false;
  int shrinks = 0;
  std::vector<BoundCheck> checks;
};

/// Shrinks a ball around a feasible x̄ until every sampled point satisfies the
/// bound. Throws PreconditionError when φ(x̄) > eps_feas.
LocalBoundReport verify_local_error_bound(const SetValuedMap& map, const Cone& cone, const Vector& center, double a,
                                          const SolvReference& reference, const LocalBoundOptions& options = {},
                                          const ExcessOptions& excess = {});

struct SolutionProbe {
  std::vector<Vector> points;
  std::vector<double> phi;
  std::vector<bool> mask;

  std::vector<Vector> feasible_points() const;
};

/// φ on a tensor grid over [lower, upper]; mask marks φ <= eps. Points outside
/// the map's box are infeasible.
SolutionProbe solution_set_probe(const SetValuedMap& map, const Cone& cone, const Vector& lower, const Vector& upper,
                                 const std::vector<int>& counts, double eps = kFeasibilityTolerance,
                                 const ExcessOptions& excess = {});

}  // namespace genequo
