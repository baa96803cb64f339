#include "genequo/increase.hpp"

#include <algorithm>
#include <cmath>

#include "genequo/error.hpp"

namespace genequo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector least_norm_solve(const Matrix& lambda, const Vector& rhs) {
  return Eigen::CompleteOrthogonalDecomposition<Matrix>(lambda).solve(rhs);
}

// B(W, t) ⊆ B(Q + C, s) checked pairwise: each w needs one q with
// sup_{B(w,t)} dist(., q + C) <= s. For orthant-like C that supremum is
// t - depth(w, q) when w ∈ q + C and dist(w, q + C) + t otherwise.
bool depth_certifies(const SetRep& image_u, const SetRep& image_x, const Cone& cone, double r, double a) {
  if (!cone.orthant_signs()) return false;
  const auto lu = image_u.layers();
  const auto lx = image_x.layers();
  if (lu.size() == 0) return true;
  if (lx.size() == 0) return false;
  if ((lu.cone && !(*lu.cone == cone)) || (lx.cone && !(*lx.cone == cone))) return false;
  const double t = lu.radius + a * r;
  const double s = lx.radius + r;
  const double slack = 1e-12 * (1.0 + s);
  for (std::size_t i = 0; i < lu.size(); ++i) {
    const Vector& w = lu.at(i);
    bool covered = false;
    for (std::size_t j = 0; j < lx.size() && !covered; ++j) {
      const Vector& q = lx.at(j);
      const double depth = cone_depth(w, q, cone);
      const double worst = depth >= 0.0 ? t - depth : dist_to_cone(w - q, cone) + t;
      covered = worst <= s + slack;
    }
    if (!covered) return false;
  }
  return true;
}

std::vector<Vector> outward_hints(const Vector& w, const SetRep& target, const Cone& cone) {
  std::vector<Vector> hints;
  auto push = [&](const Vector& v) {
    const double n = v.norm();
    if (n > 1e-300) hints.push_back(v / n);
  };
  const auto layers = target.layers();
  double best = kInf;
  Vector nearest;
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const Vector q = layers.at(j) + project_to_cone(w - layers.at(j), cone);
    const double d = (w - q).norm();
    if (d < best) {
      best = d;
      nearest = q;
    }
  }
  if (best < kInf) push(w - nearest);
  if (auto signs = cone.orthant_signs()) {
    push(-*signs);
  } else {
    const Matrix& rows = cone.constraints();
    for (Eigen::Index i = 0; i < rows.rows(); ++i) push(rows.row(i).transpose());
  }
  return hints;
}

// Finds a point of B(F(u), a r) farther than r + eps from F(x) + C.
std::optional<Vector> refute_candidate(const SetRep& image_u, const SetRep& target, const Cone& cone, double r,
                                       double a, const std::vector<Vector>& dirs, double eps) {
  const auto lu = image_u.layers();
  const double reach = lu.radius + a * r;
  for (std::size_t i = 0; i < lu.size(); ++i) {
    const Vector& w = lu.at(i);
    auto probe = [&](const Vector& d) -> std::optional<Vector> {
      Vector p = w + reach * d;
      if (dist_to_set(p, target) > r + eps) return p;
      return std::nullopt;
    };
    for (const auto& d : outward_hints(w, target, cone)) {
      if (auto p = probe(d)) return p;
    }
    for (const auto& d : dirs) {
      if (auto p = probe(d)) return p;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::LinearOrthant:
      return "linear-orthant";
    case Provenance::LocalNonlinear:
      return "local-nonlinear";
    case Provenance::Perturbation:
      return "perturbation";
    case Provenance::Empirical:
      return "empirical";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Certified:
      return "certified";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

bool IncreaseCertificate::covers(const Vector& x, double r) const {
  if (is_global()) return true;
  if (!(r < delta)) return false;
  return !center || (x - *center).norm() <= delta;
}

double openness_bound_linear(const Matrix& lambda) {
  if (lambda.rows() == 0 || lambda.cols() == 0) return 0.0;
  if (lambda.rows() > lambda.cols()) return 0.0;
  const Vector sv = Eigen::JacobiSVD<Matrix>(lambda).singularValues();
  return sv.minCoeff();
}

Vector orthant_step(const Matrix& lambda, double r) {
  const auto m = lambda.rows();
  const Vector target = Vector::Constant(m, r * std::sqrt(static_cast<double>(m)));
  return least_norm_solve(lambda, target);
}

CertifyOutcome certify_linear_orthant(const Matrix& lambda, const Cone& cone) {
  CertifyOutcome out;
  const int m = static_cast<int>(lambda.rows());
  if (cone.kind() != Cone::Kind::Orthant || cone.dim() != m) {
    out.refusal = "needs the nonnegative orthant of matching dimension, got " + cone.name();
    return out;
  }
  if (m < 2) {
    out.refusal = "rate sqrt(m) exceeds 1 only for m >= 2";
    return out;
  }
  out.openness = openness_bound_linear(lambda);
  if (!(out.openness > m)) {
    out.refusal = "openness bound " + std::to_string(out.openness) + " does not exceed m = " + std::to_string(m);
    return out;
  }
  IncreaseCertificate cert;
  cert.a = std::sqrt(static_cast<double>(m));
  cert.provenance = Provenance::LinearOrthant;
  // Solve once for r = 1 and scale: the least-norm solution is linear in r.
  const Vector unit_step = orthant_step(lambda, 1.0);
  cert.witness = [unit_step](const Vector& x, double r) -> Vector { return x + r * unit_step; };
  out.certificate = std::move(cert);
  return out;
}

Matrix numerical_jacobian(const VectorFunction& f, const Vector& x, double step) {
  const Vector fx = f(x);
  Matrix jac(fx.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector plus = x;
    Vector minus = x;
    plus[j] += step;
    minus[j] -= step;
    jac.col(j) = (f(plus) - f(minus)) / (2.0 * step);
  }
  return jac;
}

CertifyOutcome certify_local_nonlinear(const VectorFunction& f, const Vector& center, const Cone& cone,
                                       const LocalCertifyOptions& options) {
  CertifyOutcome out;
  const Matrix jac = numerical_jacobian(f, center, options.fd_step);
  const int m = static_cast<int>(jac.rows());
  if (cone.kind() != Cone::Kind::Orthant || cone.dim() != m) {
    out.refusal = "needs the nonnegative orthant of matching dimension, got " + cone.name();
    return out;
  }
  if (m < 2) {
    out.refusal = "rate sqrt(m) exceeds 1 only for m >= 2";
    return out;
  }
  out.openness = openness_bound_linear(jac);
  if (!(out.openness > m * (1.0 + options.margin))) {
    out.refusal = "local openness estimate " + std::to_string(out.openness) + " does not exceed m (1 + margin) = " +
                  std::to_string(m * (1.0 + options.margin));
    return out;
  }

  const double rate = std::sqrt(static_cast<double>(m));
  const Eigen::CompleteOrthogonalDecomposition<Matrix> solver(jac);
  // First-order step J d = e_r, refined by simplified Newton corrections that
  // keep |d| <= r.
  Witness witness = [f, solver, m](const Vector& x, double r) -> Vector {
    const Vector fx = f(x);
    const Vector target = fx + Vector::Constant(m, r * std::sqrt(static_cast<double>(m)));
    Vector d = solver.solve(target - fx);
    for (int k = 0; k < 3; ++k) {
      const Vector corrected = d + solver.solve(target - f(x + d));
      if (!corrected.allFinite() || corrected.norm() > r) break;
      d = corrected;
    }
    if (d.norm() > r) d *= r / d.norm();
    return x + d;
  };

  const SetValuedMap map = single_valued(f, static_cast<int>(center.size()), m);
  InclusionOptions check;
  check.mode = CandidateMode::WitnessOnly;
  check.witness = witness;

  double delta = options.initial_delta;
  for (int attempt = 0; attempt <= options.max_halvings; ++attempt, delta *= 0.5) {
    Rng rng(options.seed);
    bool ok = true;
    for (int i = 0; i < options.validation_points && ok; ++i) {
      const Vector x = i == 0 ? center : rng.in_ball(center, delta);
      for (double frac : {0.999, 0.5, 0.1, 0.01}) {
        const double r = frac * delta;
        if (check_increase_inclusion(map, cone, x, r, rate, check).verdict != Verdict::Certified) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      IncreaseCertificate cert;
      cert.a = rate;
      cert.delta = delta;
      cert.center = center;
      cert.witness = witness;
      cert.provenance = Provenance::LocalNonlinear;
      out.certificate = std::move(cert);
      return out;
    }
  }
  out.refusal = "witness validation failed after " + std::to_string(options.max_halvings) + " halvings";
  return out;
}

std::optional<double> perturbation_bound(double a, double beta) {
  if (!(a > 1.0) || !(beta >= 0.0)) return std::nullopt;
  if (!(beta < 1.0 - 1.0 / a)) return std::nullopt;
  return (1.0 - beta) * a;
}

std::optional<IncreaseCertificate> perturb_certificate(const IncreaseCertificate& cert, double beta) {
  if (!cert.is_global()) throw PreconditionError("perturb_certificate needs a global certificate");
  const auto rate = perturbation_bound(cert.a, beta);
  if (!rate) return std::nullopt;
  IncreaseCertificate out;
  out.a = *rate;
  out.provenance = Provenance::Perturbation;
  if (cert.witness) {
    out.witness = [inner = cert.witness, beta](const Vector& x, double r) { return inner(x, (1.0 - beta) * r); };
  }
  return out;
}

InclusionResult check_increase_inclusion(const SetValuedMap& map, const Cone& cone, const Vector& x, double r,
                                         double a, const InclusionOptions& options) {
  if (!(r > 0.0)) throw PreconditionError("check_increase_inclusion: r must be positive");
  if (!(a > 1.0)) throw PreconditionError("check_increase_inclusion: a must exceed 1");
  if (map.range_dim() != cone.dim()) throw DimensionMismatch("check_increase_inclusion", map.range_dim(), cone.dim());

  const int n = map.domain_dim();
  std::vector<Vector> candidates;
  if (options.mode != CandidateMode::Sampled && options.witness) candidates.push_back(options.witness(x, r));
  if (options.mode != CandidateMode::WitnessOnly) {
    if (!options.candidates.empty()) {
      candidates.insert(candidates.end(), options.candidates.begin(), options.candidates.end());
    } else if (n == 1) {
      const int k = std::max(1, options.line_points);
      for (int i = k; i >= -k; --i) candidates.push_back(x + Vector::Constant(1, r * i / k));
    } else {
      auto ball = ball_points(x, r, sphere_directions(n, options.domain_directions, options.seed),
                              options.radius_fractions);
      candidates.insert(candidates.end(), ball.begin(), ball.end());
    }
  }

  InclusionResult result;
  const SetRep image_x = map.eval(x);
  std::optional<SetRep> target;
  try {
    target = SetRep::plus_cone(image_x, cone);
  } catch (const PreconditionError&) {
    // F(x) carries a different cone layer; refutation is unavailable.
  }
  const auto dirs = sphere_directions(cone.dim(), options.range_directions, options.seed);

  for (const auto& u : candidates) {
    if ((u - x).norm() > r * (1.0 + 1e-12) || !map.box().contains(u)) continue;
    ++result.candidates;
    const SetRep image_u = map.eval(u);
    if (depth_certifies(image_u, image_x, cone, r, a)) {
      result.verdict = Verdict::Certified;
      result.certified_u = u;
      return result;
    }
    if (target) {
      if (auto p = refute_candidate(image_u, *target, cone, r, a, dirs, options.eps_feas)) {
        ++result.refuted;
        result.refuting_point = std::move(p);
      }
    }
  }
  result.verdict = result.candidates > 0 && result.refuted == result.candidates ? Verdict::Refuted
                                                                                 : Verdict::Inconclusive;
  return result;
}

Region Region::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) throw DimensionMismatch("Region::box", lower.size(), upper.size());
  if ((upper.array() < lower.array()).any() || !lower.allFinite() || !upper.allFinite()) {
    throw PreconditionError("Region::box needs finite bounds with lower <= upper");
  }
  return Region{std::move(lower), std::move(upper), std::nullopt, 0.0};
}

Region Region::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw PreconditionError("Region::ball needs a finite radius > 0");
  Region out;
  out.lower = center.array() - radius;
  out.upper = center.array() + radius;
  out.center = std::move(center);
  out.radius = radius;
  return out;
}

IncreaseEstimate estimate_increase_bound(const SetValuedMap& map, const Cone& cone, const Region& region,
                                         const EstimateOptions& options) {
  if (region.lower.size() != map.domain_dim()) {
    throw DimensionMismatch("estimate_increase_bound", map.domain_dim(), region.lower.size());
  }
  Rng rng(options.seed);
  const double scale =
      region.center ? region.radius : std::max(1e-12, 0.5 * (region.upper - region.lower).maxCoeff());
  std::vector<std::pair<Vector, double>> pairs;
  pairs.reserve(static_cast<std::size_t>(options.trials));
  for (int i = 0; i < options.trials; ++i) {
    Vector x = region.center ? rng.in_ball(*region.center, region.radius) : rng.in_box(region.lower, region.upper);
    const double r = scale * std::pow(10.0, rng.uniform(-3.0, 0.0)) * (region.center ? 0.999 : 1.0);
    pairs.emplace_back(std::move(x), r);
  }

  IncreaseEstimate out;
  out.trials = options.trials;
  auto refuted_at = [&](double a) {
    bool refuted = false;
    for (const auto& [x, r] : pairs) {
      if (check_increase_inclusion(map, cone, x, r, a, options.inclusion).verdict == Verdict::Refuted) {
        refuted = true;
        break;
      }
    }
    out.levels.push_back({a, refuted});
    return refuted;
  };

  double lo = 1.0 + 1e-6;
  double hi = options.a_max;
  if (refuted_at(lo)) {
    out.estimate = out.low = out.high = 1.0;
    return out;
  }
  if (!refuted_at(hi)) {
    out.estimate = out.low = out.high = hi;
    out.capped = true;
    return out;
  }
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (refuted_at(mid)) hi = mid;
    else lo = mid;
  }
  out.estimate = out.low = lo;
  out.high = hi;
  return out;
}

}  // namespace genequo
