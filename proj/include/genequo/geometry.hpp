#pragma once

// Closed convex cones in R^m, set representations built from finite clouds,
// balls, enlargements and cone sums, and the excess calculus over them.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "genequo/sampling.hpp"

namespace genequo {

inline constexpr double kProjectionTolerance = 1e-10;
inline constexpr int kProjectionMaxSweeps = 10'000;
inline constexpr int kDefaultExcessSamples = 4096;

/// Nonempty closed convex cone in R^m.
class Cone {
 public:
  enum class Kind { Orthant, NonposHalfLine, NonnegHalfLine, Polyhedral };

  static Cone orthant(int dim);
  static Cone nonpos_half_line();
  static Cone nonneg_half_line();
  /// {y : A y <= 0}. Every row of A must be finite.
  static Cone polyhedral(Matrix constraints);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// Constraint matrix of a polyhedral cone; empty for the other kinds.
  const Matrix& constraints() const noexcept { return constraints_; }

  /// Orthant-like cones are s_i * y_i >= 0 for a fixed sign vector s. Returns s,
  /// or nothing for polyhedral cones.
  std::optional<Vector> orthant_signs() const;

  bool contains(const Vector& y, double tol = kProjectionTolerance) const;
  /// C ∩ -C == {0}.
  bool is_pointed() const;

  std::string name() const;

  friend bool operator==(const Cone& lhs, const Cone& rhs);

 private:
  Cone(Kind kind, int dim, Matrix constraints = {}) : kind_(kind), dim_(dim), constraints_(std::move(constraints)) {}

  Kind kind_;
  int dim_;
  Matrix constraints_;
};

struct ProjectionOptions {
  double tolerance = kProjectionTolerance;
  int max_sweeps = kProjectionMaxSweeps;
};

/// Euclidean projection onto C. Orthant-like cones clamp componentwise;
/// polyhedral cones run Dykstra's alternating projections over the half-spaces
/// and finish with an exact solve on the detected active set.
Vector project_to_cone(const Vector& y, const Cone& cone, const ProjectionOptions& options = {});
double dist_to_cone(const Vector& y, const Cone& cone, const ProjectionOptions& options = {});

/// min_i (w_i - q_i): the largest t with B(w, t) ⊆ q + R^m_+ when nonnegative.
double orthant_depth(const Vector& w, const Vector& q);
/// Same quantity for an orthant-like cone, with the cone's sign pattern applied.
double cone_depth(const Vector& w, const Vector& q, const Cone& cone);

/// Subset of R^m. Always held in normalized form:
///   [PlusCone] -> [Enlargement] -> FinitePoints | Ball
/// with nested enlargements merged, enlargements of balls folded into the
/// radius and at most one cone layer.
class SetRep {
 public:
  struct FinitePoints {
    int dim;
    std::vector<Vector> points;
  };
  struct Ball {
    Vector center;
    double radius;
  };
  struct PlusCone {
    std::shared_ptr<const SetRep> base;
    Cone cone;
  };
  struct Enlargement {
    std::shared_ptr<const SetRep> base;
    double radius;
  };
  using Node = std::variant<FinitePoints, Ball, PlusCone, Enlargement>;

  static SetRep points(std::vector<Vector> points);
  static SetRep point(Vector p);
  static SetRep empty(int dim);
  static SetRep ball(Vector center, double radius);
  static SetRep plus_cone(const SetRep& base, const Cone& cone);
  static SetRep enlargement(const SetRep& base, double radius);
  /// The cone itself, as {0} + C.
  static SetRep cone(const Cone& cone);

  const Node& node() const noexcept { return node_; }
  int dim() const;
  bool is_empty() const;
  int depth() const;

  /// Every normalized set is B(generators, radius) + cone.
  struct Layers {
    const std::vector<Vector>* generators;  // null when the core is a Ball
    const Vector* center;                   // set when the core is a Ball
    double radius = 0.0;
    const Cone* cone = nullptr;

    std::size_t size() const { return generators ? generators->size() : 1; }
    const Vector& at(std::size_t i) const { return generators ? (*generators)[i] : *center; }
  };
  Layers layers() const;

  std::string describe() const;

 private:
  explicit SetRep(Node node) : node_(std::move(node)) {}
  Node node_;
};

double dist_to_set(const Vector& y, const SetRep& set);

/// Pointwise Minkowski sum. Generators add pairwise, radii add, and at most one
/// of the operands may carry a cone layer unless both carry the same cone.
SetRep minkowski_sum(const SetRep& lhs, const SetRep& rhs);

enum class ExcessKind {
  Exact,
  SampledLowerBound,
  EmptyTarget,    // +inf: the second set is empty
  VacuousSource,  // -inf: the first set is empty
};

struct ExcessValue {
  double value = 0.0;
  std::optional<Vector> attained_at;
  ExcessKind kind = ExcessKind::Exact;
  std::size_t samples = 0;

  bool exact() const noexcept { return kind != ExcessKind::SampledLowerBound; }
};

struct ExcessOptions {
  int samples = kDefaultExcessSamples;
  std::uint64_t seed = kDefaultSeed;
};

/// exc(S1, S2) = sup_{s in S1} dist(s, S2).
///
/// Exact when S1 has no radius (finite clouds); when S2 is convex (a single
/// generator, optionally enlarged and/or plus a cone) and some generator of S1
/// lies outside it, via exc(B(S, r), K) = exc(S, K) + r; and whenever a cone
/// layer of S1 matches the cone layer of S2, that layer is erased first since
/// exc(S + C, T) = exc(S, T) for T + C ⊆ T. Everything else is a sampled lower
/// bound over sphere directions plus the outward normal of each generator.
ExcessValue excess(const SetRep& source, const SetRep& target, const ExcessOptions& options = {});

/// exc(S, C).
ExcessValue excess_to_cone(const SetRep& set, const Cone& cone, const ExcessOptions& options = {});

/// Brute-force lower bound for exc(S1, S2) from the given directions only; no
/// closed forms. Used as an independent check of `excess`.
ExcessValue sampled_excess(const SetRep& source, const SetRep& target, const std::vector<Vector>& directions);

}  // namespace genequo
