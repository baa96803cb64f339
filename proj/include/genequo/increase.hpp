#pragma once

// Metric C-increase: certificates for linear and locally regular maps, the
// perturbation rule, a sampled inclusion checker and an empirical estimate of
// the exact increase bound.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "genequo/mappings.hpp"

namespace genequo {

inline constexpr double kDefaultMaxRate = 8.0;

enum class Provenance { LinearOrthant, LocalNonlinear, Perturbation, Empirical };

std::string to_string(Provenance provenance);

/// Witness step: for a base point x and radius r, a point u with d(u, x) <= r
/// at which B(F(u), a r) ⊆ B(F(x) + C, r) is expected to hold.
using Witness = std::function<Vector(const Vector& x, double r)>;

struct IncreaseCertificate {
  double a = 1.0;
  /// Locality radius; +inf for a global certificate.
  double delta = std::numeric_limits<double>::infinity();
  /// Reference point of a local certificate.
  std::optional<Vector> center;
  /// May be empty (e.g. an estimated rate); callers then search for u.
  Witness witness;
  Provenance provenance = Provenance::Empirical;

  bool is_global() const noexcept { return delta == std::numeric_limits<double>::infinity(); }
  /// Whether the pair (x, r) lies in the certificate's scope: r < delta and
  /// d(x, center) <= delta.
  bool covers(const Vector& x, double r) const;
};

/// Either a certificate, or the reason one could not be issued. A refusal only
/// means the sufficient condition was not met.
struct CertifyOutcome {
  std::optional<IncreaseCertificate> certificate;
  std::string refusal;
  /// Openness bound (smallest singular value of the adjoint) that was tested.
  double openness = 0.0;

  explicit operator bool() const noexcept { return certificate.has_value(); }
};

/// Smallest singular value of Λ^T, i.e. inf over unit u* of |Λ^T u*|. Zero
/// when Λ is not onto (in particular when m > n).
double openness_bound_linear(const Matrix& lambda);

/// Least-norm solution of Λ d = r sqrt(m) (1, ..., 1).
Vector orthant_step(const Matrix& lambda, double r);

/// Λ with openness bound > m over C = R^m_+ (m >= 2) is metrically increasing
/// with rate sqrt(m), globally, stepping by the least-norm d from
/// `orthant_step`. The same certificate serves x ↦ Λx + C.
CertifyOutcome certify_linear_orthant(const Matrix& lambda, const Cone& cone);

struct LocalCertifyOptions {
  double fd_step = 1e-6;
  double margin = 0.05;
  double initial_delta = 1.0;
  int max_halvings = 20;
  int validation_points = 24;
  std::uint64_t seed = kDefaultSeed;
};

/// Finite-difference Jacobian (central differences).
Matrix numerical_jacobian(const VectorFunction& f, const Vector& x, double step);

/// Local version for smooth f at x̄: requires σ_min(J^T) > m (1 + margin); the
/// locality radius is found by halving `initial_delta` until the first-order
/// witness passes the inclusion check at every validation pair.
CertifyOutcome certify_local_nonlinear(const VectorFunction& f, const Vector& center, const Cone& cone,
                                       const LocalCertifyOptions& options = {});

/// (1 - β) a when β < 1 - 1/a, else nothing.
std::optional<double> perturbation_bound(double a, double beta);

/// Certificate for F + G with G β-Lipschitz. The witness is the original one
/// evaluated at radius (1 - β) r. Requires a global certificate.
std::optional<IncreaseCertificate> perturb_certificate(const IncreaseCertificate& cert, double beta);

enum class Verdict { Certified, Refuted, Inconclusive };

std::string to_string(Verdict verdict);

enum class CandidateMode { WitnessOnly, Sampled, WitnessThenSampled };

struct InclusionOptions {
  CandidateMode mode = CandidateMode::WitnessThenSampled;
  Witness witness;
  /// Explicit candidate set (e.g. a finite feasible sample); replaces the
  /// sampled ball when nonempty. Candidates farther than r from x are skipped.
  std::vector<Vector> candidates;
  int domain_directions = 64;
  std::vector<double> radius_fractions{1.0, 0.5, 0.25};
  /// Candidates per side on the segment [x - r, x + r] for one-dimensional domains.
  int line_points = 8;
  int range_directions = 64;
  double eps_feas = kFeasibilityTolerance;
  std::uint64_t seed = kDefaultSeed;
};

struct InclusionResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Vector> certified_u;
  /// A point of B(F(u), a r) outside B(F(x) + C, r) for the last refuted u.
  std::optional<Vector> refuting_point;
  std::size_t candidates = 0;
  std::size_t refuted = 0;
};

/// Checks ∃u ∈ B(x, r): B(F(u), a r) ⊆ B(F(x) + C, r) over candidate u.
///
/// Certified: for some u, every generator w of F(u) has one q in F(x) whose
/// translated cone q + C contains the ball around w after the radii are
/// accounted for (exact per pair for orthant-like C, so sufficient overall).
/// Refuted: every candidate u has a sampled point of B(F(u), a r) at distance
/// more than r + eps from F(x) + C. Non-orthant cones never certify.
InclusionResult check_increase_inclusion(const SetValuedMap& map, const Cone& cone, const Vector& x, double r,
                                         double a, const InclusionOptions& options = {});

/// Sampling region for the empirical bound: a box, or a ball B(center, radius)
/// whose radius also caps r (local form).
struct Region {
  Vector lower;
  Vector upper;
  std::optional<Vector> center;
  double radius = 0.0;

  static Region box(Vector lower, Vector upper);
  static Region ball(Vector center, double radius);
};

struct EstimateOptions {
  int trials = 200;
  double a_max = kDefaultMaxRate;
  double tolerance = 0.05;
  std::uint64_t seed = kDefaultSeed;
  InclusionOptions inclusion;
};

struct RateLevel {
  double a;
  bool refuted;
};

/// Bracket [low, high] for the exact increase bound: low is the largest tested
/// rate no sampled (x, r) refuted, high the smallest rate that was refuted.
/// A heuristic estimate, never a certificate. [1, 1] means no evidence.
struct IncreaseEstimate {
  double estimate = 1.0;
  double low = 1.0;
  double high = 1.0;
  bool capped = false;  // a_max itself was not refuted
  int trials = 0;
  std::vector<RateLevel> levels;
};

IncreaseEstimate estimate_increase_bound(const SetValuedMap& map, const Cone& cone, const Region& region,
                                         const EstimateOptions& options = {});

}  // namespace genequo
