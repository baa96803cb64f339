#pragma once

// Set-valued mappings x ↦ F(x) ⊆ R^m, the residual φ(x) = exc(F(x), C) and
// constructors for the standard problem classes.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "genequo/geometry.hpp"

namespace genequo {

inline constexpr double kFeasibilityTolerance = 1e-8;

using VectorFunction = std::function<Vector(const Vector&)>;
using ScalarFunction = std::function<double(const Vector&)>;

/// Axis-aligned domain box, possibly unbounded.
struct DomainBox {
  Vector lower;
  Vector upper;

  static DomainBox unbounded(int dim);
  static DomainBox symmetric(int dim, double half_width);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& x) const;
  bool bounded() const { return lower.allFinite() && upper.allFinite(); }
  Vector clamp(const Vector& x) const;
};

enum class MapKind { AffinePlusCone, Linear, SingleValued, ImageShift, SemiInfinite, ViResidual, Sum, Custom };

std::string to_string(MapKind kind);

struct MapMetadata {
  std::optional<Matrix> matrix;       // affine and linear maps
  std::optional<Vector> offset;       // affine maps
  std::optional<Cone> cone;           // cone layer added by the map itself
  std::vector<Vector> samples;        // R for image shifts and VI residuals, T for semi-infinite maps
  std::optional<double> lipschitz;    // known Lipschitz constant, when supplied
  VectorFunction base_function;       // f for single-valued maps and image shifts
  std::string description;
};

class SetValuedMap {
 public:
  using Evaluator = std::function<SetRep(const Vector&)>;

  SetValuedMap(MapKind kind, int domain_dim, int range_dim, Evaluator evaluator, MapMetadata metadata = {});

  /// F(x) in normalized form. Throws OutOfDomain outside the declared box.
  SetRep eval(const Vector& x) const;

  MapKind kind() const noexcept { return kind_; }
  int domain_dim() const noexcept { return domain_dim_; }
  int range_dim() const noexcept { return range_dim_; }
  const DomainBox& box() const noexcept { return box_; }
  const MapMetadata& metadata() const noexcept { return metadata_; }

  SetValuedMap with_box(DomainBox box) const;

 private:
  MapKind kind_;
  int domain_dim_;
  int range_dim_;
  Evaluator evaluator_;
  MapMetadata metadata_;
  DomainBox box_;
};

/// x ↦ {Λx + b} + C.
SetValuedMap affine_plus_cone(Matrix lambda, Cone cone, std::optional<Vector> offset = std::nullopt);
/// x ↦ {Λx}.
SetValuedMap linear_map(Matrix lambda);
/// x ↦ {f(x)}.
SetValuedMap single_valued(VectorFunction f, int domain_dim, int range_dim, std::string description = {});
/// x ↦ f(R) - f(x) for a finite sample R of the feasible set.
SetValuedMap image_shift(VectorFunction f, std::vector<Vector> feasible_sample, int range_dim);
/// x ↦ {g(t, x) : t in T} ⊆ R, for a finite index grid T.
SetValuedMap semi_infinite(std::function<double(const Vector& t, const Vector& x)> g, std::vector<Vector> index_grid,
                           int domain_dim);
/// x ↦ {<∇φ(x), z - x> : z in R} ⊆ R, for a finite sample R.
SetValuedMap vi_residual(VectorFunction gradient, std::vector<Vector> feasible_sample);
/// x ↦ F(x) + G(x).
SetValuedMap sum(const SetValuedMap& f, const SetValuedMap& g);

enum class Exactness { Exact, SampledLowerBound };

struct Residual {
  double value = 0.0;
  std::optional<Vector> attained_at;
  Exactness exactness = Exactness::Exact;
  bool vacuous = false;  // F(x) empty
  std::size_t samples = 0;

  bool feasible(double eps = kFeasibilityTolerance) const { return value <= eps; }
};

/// φ(x) = exc(F(x), C), clamped at 0 when F(x) is empty.
Residual phi(const SetValuedMap& map, const Cone& cone, const Vector& x, const ExcessOptions& options = {});

struct ProbeOptions {
  int directions = 16;
  /// Strictly decreasing radii of the approach sequences x_k = x̄ + r_k d.
  std::vector<double> radii;
  /// The last `tail` terms of each sequence stand in for its limit.
  int tail = 3;
  double tolerance = 1e-6;
  std::uint64_t seed = kDefaultSeed;
};

struct ProbeSequence {
  Vector direction;
  std::vector<double> values;
  double liminf_estimate = 0.0;
  double limsup_estimate = 0.0;
};

/// Sampled refutation of lower/upper semicontinuity of φ at x̄. A clean report
/// only means no sampled sequence contradicted semicontinuity.
struct ProbeReport {
  double phi_center = 0.0;
  std::vector<ProbeSequence> sequences;
  bool lsc_violation = false;
  bool usc_violation = false;
  double worst_lsc_gap = 0.0;  // max over sequences of φ(x̄) - liminf
  double worst_usc_gap = 0.0;  // max over sequences of limsup - φ(x̄)
};

ProbeReport semicontinuity_probe(const SetValuedMap& map, const Cone& cone, const Vector& center,
                                 ProbeOptions options = {});

}  // namespace genequo
