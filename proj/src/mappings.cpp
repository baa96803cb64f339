#include "genequo/mappings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genequo/error.hpp"

namespace genequo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const char* what, const Vector& v, int dim) {
  if (v.size() != dim) throw DimensionMismatch(what, dim, static_cast<long>(v.size()));
}

void require_samples(const char* what, const std::vector<Vector>& samples, int dim) {
  if (samples.empty()) throw PreconditionError(std::string(what) + ": sample set must be nonempty");
  for (const auto& s : samples) {
    require_dim(what, s, dim);
    if (!s.allFinite()) throw PreconditionError(std::string(what) + ": non-finite sample");
  }
}

}  // namespace

DomainBox DomainBox::unbounded(int dim) {
  return {Vector::Constant(dim, -kInf), Vector::Constant(dim, kInf)};
}

DomainBox DomainBox::symmetric(int dim, double half_width) {
  return {Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width)};
}

bool DomainBox::contains(const Vector& x) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(x[i]));
    if (!(x[i] >= lower[i] - slack && x[i] <= upper[i] + slack)) return false;
  }
  return true;
}

Vector DomainBox::clamp(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::AffinePlusCone:
      return "affine_plus_cone";
    case MapKind::Linear:
      return "linear";
    case MapKind::SingleValued:
      return "single_valued";
    case MapKind::ImageShift:
      return "image_shift";
    case MapKind::SemiInfinite:
      return "semi_infinite";
    case MapKind::ViResidual:
      return "vi_residual";
    case MapKind::Sum:
      return "sum";
    case MapKind::Custom:
      return "custom";
  }
  return "unknown";
}

SetValuedMap::SetValuedMap(MapKind kind, int domain_dim, int range_dim, Evaluator evaluator, MapMetadata metadata)
    : kind_(kind),
      domain_dim_(domain_dim),
      range_dim_(range_dim),
      evaluator_(std::move(evaluator)),
      metadata_(std::move(metadata)),
      box_(DomainBox::unbounded(domain_dim)) {
  if (domain_dim < 1 || range_dim < 1) throw PreconditionError("mapping dimensions must be positive");
  if (!evaluator_) throw PreconditionError("mapping needs an evaluator");
}

SetRep SetValuedMap::eval(const Vector& x) const {
  require_dim("SetValuedMap::eval", x, domain_dim_);
  if (!x.allFinite()) throw OutOfDomain("evaluation point has non-finite coordinates");
  if (!box_.contains(x)) throw OutOfDomain("evaluation point lies outside the declared domain box");
  SetRep value = evaluator_(x);
  if (value.dim() != range_dim_) throw DimensionMismatch("SetValuedMap::eval (value)", range_dim_, value.dim());
  return value;
}

SetValuedMap SetValuedMap::with_box(DomainBox box) const {
  if (box.dim() != domain_dim_ || box.upper.size() != domain_dim_) {
    throw DimensionMismatch("SetValuedMap::with_box", domain_dim_, box.dim());
  }
  if ((box.upper.array() < box.lower.array()).any()) throw PreconditionError("domain box has lower > upper");
  SetValuedMap copy = *this;
  copy.box_ = std::move(box);
  return copy;
}

SetValuedMap affine_plus_cone(Matrix lambda, Cone cone, std::optional<Vector> offset) {
  const int m = static_cast<int>(lambda.rows());
  const int n = static_cast<int>(lambda.cols());
  if (cone.dim() != m) throw DimensionMismatch("affine_plus_cone (cone)", m, cone.dim());
  if (!lambda.allFinite()) throw PreconditionError("affine_plus_cone: matrix has non-finite entries");
  const Vector b = offset.value_or(Vector::Zero(m));
  require_dim("affine_plus_cone (offset)", b, m);
  MapMetadata meta;
  meta.matrix = lambda;
  meta.offset = b;
  meta.cone = cone;
  meta.lipschitz = Eigen::JacobiSVD<Matrix>(lambda).singularValues()(0);
  meta.description = "x -> Lx + b + " + cone.name();
  auto evaluator = [lambda, b, cone](const Vector& x) { return SetRep::plus_cone(SetRep::point(lambda * x + b), cone); };
  return SetValuedMap(MapKind::AffinePlusCone, n, m, std::move(evaluator), std::move(meta));
}

SetValuedMap linear_map(Matrix lambda) {
  const int m = static_cast<int>(lambda.rows());
  const int n = static_cast<int>(lambda.cols());
  if (!lambda.allFinite()) throw PreconditionError("linear_map: matrix has non-finite entries");
  MapMetadata meta;
  meta.matrix = lambda;
  meta.lipschitz = Eigen::JacobiSVD<Matrix>(lambda).singularValues()(0);
  meta.base_function = [lambda](const Vector& x) -> Vector { return lambda * x; };
  meta.description = "x -> Lx";
  auto evaluator = [lambda](const Vector& x) { return SetRep::point(lambda * x); };
  return SetValuedMap(MapKind::Linear, n, m, std::move(evaluator), std::move(meta));
}

SetValuedMap single_valued(VectorFunction f, int domain_dim, int range_dim, std::string description) {
  if (!f) throw PreconditionError("single_valued: empty function");
  MapMetadata meta;
  meta.base_function = f;
  meta.description = description.empty() ? "x -> {f(x)}" : std::move(description);
  auto evaluator = [f](const Vector& x) { return SetRep::point(f(x)); };
  return SetValuedMap(MapKind::SingleValued, domain_dim, range_dim, std::move(evaluator), std::move(meta));
}

SetValuedMap image_shift(VectorFunction f, std::vector<Vector> feasible_sample, int range_dim) {
  if (!f) throw PreconditionError("image_shift: empty function");
  if (feasible_sample.empty()) throw PreconditionError("image_shift: feasible sample must be nonempty");
  const int n = static_cast<int>(feasible_sample.front().size());
  require_samples("image_shift", feasible_sample, n);
  std::vector<Vector> images;
  images.reserve(feasible_sample.size());
  for (const auto& z : feasible_sample) {
    images.push_back(f(z));
    require_dim("image_shift (f value)", images.back(), range_dim);
  }
  MapMetadata meta;
  meta.samples = feasible_sample;
  meta.base_function = f;
  meta.description = "x -> f(R) - f(x)";
  auto evaluator = [f, images = std::move(images)](const Vector& x) {
    const Vector fx = f(x);
    std::vector<Vector> shifted;
    shifted.reserve(images.size());
    for (const auto& y : images) shifted.push_back(y - fx);
    return SetRep::points(std::move(shifted));
  };
  return SetValuedMap(MapKind::ImageShift, n, range_dim, std::move(evaluator), std::move(meta));
}

SetValuedMap semi_infinite(std::function<double(const Vector& t, const Vector& x)> g, std::vector<Vector> index_grid,
                           int domain_dim) {
  if (!g) throw PreconditionError("semi_infinite: empty constraint function");
  if (index_grid.empty()) throw PreconditionError("semi_infinite: index grid must be nonempty");
  require_samples("semi_infinite", index_grid, static_cast<int>(index_grid.front().size()));
  MapMetadata meta;
  meta.samples = index_grid;
  meta.description = "x -> {g(t, x) : t in T}";
  auto evaluator = [g, grid = std::move(index_grid)](const Vector& x) {
    std::vector<Vector> values;
    values.reserve(grid.size());
    for (const auto& t : grid) values.push_back(Vector::Constant(1, g(t, x)));
    return SetRep::points(std::move(values));
  };
  return SetValuedMap(MapKind::SemiInfinite, domain_dim, 1, std::move(evaluator), std::move(meta));
}

SetValuedMap vi_residual(VectorFunction gradient, std::vector<Vector> feasible_sample) {
  if (!gradient) throw PreconditionError("vi_residual: empty gradient");
  if (feasible_sample.empty()) throw PreconditionError("vi_residual: feasible sample must be nonempty");
  const int n = static_cast<int>(feasible_sample.front().size());
  require_samples("vi_residual", feasible_sample, n);
  MapMetadata meta;
  meta.samples = feasible_sample;
  meta.description = "x -> <grad(x), R - x>";
  auto evaluator = [gradient, sample = std::move(feasible_sample), n](const Vector& x) {
    const Vector grad = gradient(x);
    require_dim("vi_residual (gradient)", grad, n);
    std::vector<Vector> values;
    values.reserve(sample.size());
    for (const auto& z : sample) values.push_back(Vector::Constant(1, grad.dot(z - x)));
    return SetRep::points(std::move(values));
  };
  return SetValuedMap(MapKind::ViResidual, n, 1, std::move(evaluator), std::move(meta));
}

SetValuedMap sum(const SetValuedMap& f, const SetValuedMap& g) {
  if (f.domain_dim() != g.domain_dim()) throw DimensionMismatch("sum (domain)", f.domain_dim(), g.domain_dim());
  if (f.range_dim() != g.range_dim()) throw DimensionMismatch("sum (range)", f.range_dim(), g.range_dim());
  MapMetadata meta;
  meta.description = "x -> F(x) + G(x)";
  if (f.metadata().cone) meta.cone = f.metadata().cone;
  else if (g.metadata().cone) meta.cone = g.metadata().cone;
  auto evaluator = [f, g](const Vector& x) { return minkowski_sum(f.eval(x), g.eval(x)); };
  SetValuedMap out(MapKind::Sum, f.domain_dim(), f.range_dim(), std::move(evaluator), std::move(meta));
  DomainBox box{f.box().lower.cwiseMax(g.box().lower), f.box().upper.cwiseMin(g.box().upper)};
  return out.with_box(std::move(box));
}

Residual phi(const SetValuedMap& map, const Cone& cone, const Vector& x, const ExcessOptions& options) {
  if (map.range_dim() != cone.dim()) throw DimensionMismatch("phi (cone)", map.range_dim(), cone.dim());
  const ExcessValue exc = excess_to_cone(map.eval(x), cone, options);
  Residual out;
  out.samples = exc.samples;
  out.attained_at = exc.attained_at;
  switch (exc.kind) {
    case ExcessKind::VacuousSource:
      out.value = 0.0;
      out.vacuous = true;
      break;
    case ExcessKind::SampledLowerBound:
      out.value = std::max(0.0, exc.value);
      out.exactness = Exactness::SampledLowerBound;
      break;
    default:
      out.value = std::max(0.0, exc.value);
      break;
  }
  return out;
}

ProbeReport semicontinuity_probe(const SetValuedMap& map, const Cone& cone, const Vector& center,
                                 ProbeOptions options) {
  if (options.radii.empty()) {
    for (int k = 1; k <= 12; ++k) options.radii.push_back(std::pow(10.0, -k));
  }
  for (std::size_t i = 0; i < options.radii.size(); ++i) {
    if (!(options.radii[i] > 0.0) || (i > 0 && !(options.radii[i] < options.radii[i - 1]))) {
      throw PreconditionError("semicontinuity_probe: radii must be positive and strictly decreasing");
    }
  }
  const int tail = std::clamp(options.tail, 1, static_cast<int>(options.radii.size()));

  ProbeReport report;
  report.phi_center = phi(map, cone, center).value;
  for (const auto& dir : sphere_directions(map.domain_dim(), options.directions, options.seed)) {
    ProbeSequence seq;
    seq.direction = dir;
    for (double r : options.radii) {
      const Vector x = center + r * dir;
      if (!map.box().contains(x)) continue;
      seq.values.push_back(phi(map, cone, x).value);
    }
    if (seq.values.empty()) continue;
    const auto first = seq.values.end() - std::min<std::ptrdiff_t>(tail, std::ssize(seq.values));
    seq.liminf_estimate = *std::min_element(first, seq.values.end());
    seq.limsup_estimate = *std::max_element(first, seq.values.end());
    report.worst_lsc_gap = std::max(report.worst_lsc_gap, report.phi_center - seq.liminf_estimate);
    report.worst_usc_gap = std::max(report.worst_usc_gap, seq.limsup_estimate - report.phi_center);
    report.sequences.push_back(std::move(seq));
  }
  report.lsc_violation = report.worst_lsc_gap > options.tolerance;
  report.usc_violation = report.worst_usc_gap > options.tolerance;
  return report;
}

}  // namespace genequo
