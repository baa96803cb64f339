#include "genequo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "genequo/error.hpp"

namespace genequo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const char* what, const Vector& y, int dim) {
  if (y.size() != dim) throw DimensionMismatch(what, dim, static_cast<long>(y.size()));
}

bool all_finite(const Vector& v) { return v.allFinite(); }

Vector project_polyhedral(const Vector& y, const Matrix& constraints, const ProjectionOptions& options) {
  std::vector<Eigen::Index> rows;
  std::vector<double> norms;
  for (Eigen::Index i = 0; i < constraints.rows(); ++i) {
    const double n = constraints.row(i).norm();
    if (n > 0.0) {
      rows.push_back(i);
      norms.push_back(n);
    }
  }
  const double scale = std::max(1.0, y.norm());
  const double tol = options.tolerance * scale;

  auto violation = [&](const Vector& x) {
    double worst = -kInf;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      worst = std::max(worst, constraints.row(rows[k]).dot(x) / norms[k]);
    }
    return worst;
  };

  if (rows.empty() || violation(y) <= 0.0) return y;

  // Dykstra: one correction vector per half-space.
  Matrix corrections = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), y.size());
  Vector x = y;
  bool converged = false;
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const Vector before = x;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto row = constraints.row(rows[k]).transpose();
      const auto kk = static_cast<Eigen::Index>(k);
      const Vector shifted = x + corrections.row(kk).transpose();
      const double v = row.dot(shifted);
      Vector next = shifted;
      if (v > 0.0) next -= (v / (norms[k] * norms[k])) * row;
      corrections.row(kk) = (shifted - next).transpose();
      x = std::move(next);
    }
    if ((x - before).norm() <= tol && violation(x) <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("polyhedral projection did not converge within " + std::to_string(options.max_sweeps) +
                           " sweeps");
  }

  // Polish: exact projection onto the null space of the active rows, kept only
  // when the KKT conditions verify.
  std::vector<Eigen::Index> active;
  const double active_tol = std::max(1e-7 * scale, 1e3 * tol);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (constraints.row(rows[k]).dot(x) / norms[k] >= -active_tol) active.push_back(rows[k]);
  }
  if (active.empty()) return x;
  Matrix active_t(y.size(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    active_t.col(static_cast<Eigen::Index>(k)) = constraints.row(active[k]).transpose();
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(active_t);
  const Vector multipliers = cod.solve(y);
  const Vector polished = y - active_t * multipliers;
  const bool dual_ok = multipliers.minCoeff() >= -1e-9 * scale;
  const bool primal_ok = violation(polished) <= tol;
  const bool close = (polished - x).norm() <= 1e-6 * scale;
  return dual_ok && primal_ok && close ? polished : x;
}

// Nearest point of g + C for the translated cone (or of {g} without cone).
Vector nearest_in_translate(const Vector& y, const Vector& g, const Cone* cone) {
  if (!cone) return g;
  return g + project_to_cone(y - g, *cone);
}

}  // namespace

// --- Cone -------------------------------------------------------------------

Cone Cone::orthant(int dim) {
  if (dim < 1) throw PreconditionError("orthant dimension must be positive");
  return Cone(Kind::Orthant, dim);
}

Cone Cone::nonpos_half_line() { return Cone(Kind::NonposHalfLine, 1); }

Cone Cone::nonneg_half_line() { return Cone(Kind::NonnegHalfLine, 1); }

Cone Cone::polyhedral(Matrix constraints) {
  if (constraints.cols() < 1) throw PreconditionError("polyhedral cone needs at least one column");
  if (!constraints.allFinite()) throw PreconditionError("polyhedral cone matrix has non-finite entries");
  const int dim = static_cast<int>(constraints.cols());
  return Cone(Kind::Polyhedral, dim, std::move(constraints));
}

std::optional<Vector> Cone::orthant_signs() const {
  switch (kind_) {
    case Kind::Orthant:
    case Kind::NonnegHalfLine:
      return Vector::Ones(dim_);
    case Kind::NonposHalfLine:
      return Vector::Constant(1, -1.0);
    case Kind::Polyhedral:
      return std::nullopt;
  }
  return std::nullopt;
}

bool Cone::contains(const Vector& y, double tol) const {
  require_dim("Cone::contains", y, dim_);
  if (auto signs = orthant_signs()) return y.cwiseProduct(*signs).minCoeff() >= -tol;
  for (Eigen::Index i = 0; i < constraints_.rows(); ++i) {
    const double n = constraints_.row(i).norm();
    if (n > 0.0 && constraints_.row(i).dot(y) / n > tol) return false;
  }
  return true;
}

bool Cone::is_pointed() const {
  if (kind_ != Kind::Polyhedral) return true;
  // C ∩ -C is the null space of the constraint matrix.
  Eigen::FullPivLU<Matrix> lu(constraints_);
  return lu.rank() == dim_;
}

std::string Cone::name() const {
  switch (kind_) {
    case Kind::Orthant:
      return "orthant(" + std::to_string(dim_) + ")";
    case Kind::NonposHalfLine:
      return "nonpos_half_line";
    case Kind::NonnegHalfLine:
      return "nonneg_half_line";
    case Kind::Polyhedral:
      return "polyhedral(" + std::to_string(constraints_.rows()) + "x" + std::to_string(dim_) + ")";
  }
  return "cone";
}

bool operator==(const Cone& lhs, const Cone& rhs) {
  if (lhs.kind_ != rhs.kind_ || lhs.dim_ != rhs.dim_) return false;
  if (lhs.kind_ != Cone::Kind::Polyhedral) return true;
  return lhs.constraints_.rows() == rhs.constraints_.rows() && lhs.constraints_ == rhs.constraints_;
}

Vector project_to_cone(const Vector& y, const Cone& cone, const ProjectionOptions& options) {
  require_dim("project_to_cone", y, cone.dim());
  if (auto signs = cone.orthant_signs()) {
    return y.cwiseProduct(*signs).cwiseMax(0.0).cwiseProduct(*signs);
  }
  return project_polyhedral(y, cone.constraints(), options);
}

double dist_to_cone(const Vector& y, const Cone& cone, const ProjectionOptions& options) {
  if (auto signs = cone.orthant_signs()) {
    require_dim("dist_to_cone", y, cone.dim());
    return y.cwiseProduct(*signs).cwiseMin(0.0).norm();
  }
  return (y - project_to_cone(y, cone, options)).norm();
}

double orthant_depth(const Vector& w, const Vector& q) {
  require_dim("orthant_depth", q, static_cast<int>(w.size()));
  return (w - q).minCoeff();
}

double cone_depth(const Vector& w, const Vector& q, const Cone& cone) {
  auto signs = cone.orthant_signs();
  if (!signs) throw PreconditionError("cone_depth needs an orthant-like cone, got " + cone.name());
  require_dim("cone_depth", w, cone.dim());
  return orthant_depth(w.cwiseProduct(*signs), q.cwiseProduct(*signs));
}

// --- SetRep -----------------------------------------------------------------

SetRep SetRep::points(std::vector<Vector> pts) {
  if (pts.empty()) throw PreconditionError("SetRep::points needs at least one point; use SetRep::empty");
  const int dim = static_cast<int>(pts.front().size());
  for (const auto& p : pts) {
    require_dim("SetRep::points", p, dim);
    if (!all_finite(p)) throw PreconditionError("SetRep::points: non-finite coordinate");
  }
  return SetRep(FinitePoints{dim, std::move(pts)});
}

SetRep SetRep::point(Vector p) { return points({std::move(p)}); }

SetRep SetRep::empty(int dim) { return SetRep(FinitePoints{dim, {}}); }

SetRep SetRep::ball(Vector center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw PreconditionError("ball radius must be finite and >= 0");
  if (!all_finite(center)) throw PreconditionError("ball center has non-finite coordinates");
  return SetRep(Ball{std::move(center), radius});
}

SetRep SetRep::enlargement(const SetRep& base, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw PreconditionError("enlargement radius must be finite and >= 0");
  }
  if (radius == 0.0 || base.is_empty()) return base;
  return std::visit(
      [&](const auto& node) -> SetRep {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return SetRep(Ball{node.center, node.radius + radius});
        } else if constexpr (std::is_same_v<T, Enlargement>) {
          return SetRep(Enlargement{node.base, node.radius + radius});
        } else if constexpr (std::is_same_v<T, PlusCone>) {
          // B(S, r) + C == B(S + C, r) in Euclidean space.
          return plus_cone(enlargement(*node.base, radius), node.cone);
        } else {
          return SetRep(Enlargement{std::make_shared<const SetRep>(base), radius});
        }
      },
      base.node_);
}

SetRep SetRep::plus_cone(const SetRep& base, const Cone& cone) {
  if (base.dim() != cone.dim()) throw DimensionMismatch("SetRep::plus_cone", base.dim(), cone.dim());
  if (base.is_empty()) return base;
  if (const auto* inner = std::get_if<PlusCone>(&base.node_)) {
    if (inner->cone == cone) return base;
    throw PreconditionError("sets carrying two different cone layers are not supported");
  }
  return SetRep(PlusCone{std::make_shared<const SetRep>(base), cone});
}

SetRep SetRep::cone(const Cone& c) { return plus_cone(point(Vector::Zero(c.dim())), c); }

int SetRep::dim() const {
  return std::visit(
      [](const auto& node) -> int {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          return node.dim;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return static_cast<int>(node.center.size());
        } else {
          return node.base->dim();
        }
      },
      node_);
}

bool SetRep::is_empty() const {
  if (const auto* fp = std::get_if<FinitePoints>(&node_)) return fp->points.empty();
  if (const auto* pc = std::get_if<PlusCone>(&node_)) return pc->base->is_empty();
  if (const auto* en = std::get_if<Enlargement>(&node_)) return en->base->is_empty();
  return false;
}

int SetRep::depth() const {
  if (const auto* pc = std::get_if<PlusCone>(&node_)) return 1 + pc->base->depth();
  if (const auto* en = std::get_if<Enlargement>(&node_)) return 1 + en->base->depth();
  return 1;
}

SetRep::Layers SetRep::layers() const {
  Layers out{};
  const SetRep* cur = this;
  while (true) {
    if (const auto* pc = std::get_if<PlusCone>(&cur->node_)) {
      out.cone = &pc->cone;
      cur = pc->base.get();
    } else if (const auto* en = std::get_if<Enlargement>(&cur->node_)) {
      out.radius += en->radius;
      cur = en->base.get();
    } else if (const auto* b = std::get_if<Ball>(&cur->node_)) {
      out.radius += b->radius;
      out.center = &b->center;
      return out;
    } else {
      out.generators = &std::get<FinitePoints>(cur->node_).points;
      return out;
    }
  }
}

std::string SetRep::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FinitePoints>) {
          os << "points[" << node.points.size() << "]";
        } else if constexpr (std::is_same_v<T, Ball>) {
          os << "ball(r=" << node.radius << ")";
        } else if constexpr (std::is_same_v<T, PlusCone>) {
          os << node.base->describe() << " + " << node.cone.name();
        } else {
          os << "B(" << node.base->describe() << ", " << node.radius << ")";
        }
      },
      node_);
  return os.str();
}

double dist_to_set(const Vector& y, const SetRep& set) {
  require_dim("dist_to_set", y, set.dim());
  const auto layers = set.layers();
  if (layers.size() == 0) return kInf;
  double best = kInf;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Vector diff = y - layers.at(i);
    best = std::min(best, layers.cone ? dist_to_cone(diff, *layers.cone) : diff.norm());
  }
  return std::max(0.0, best - layers.radius);
}

SetRep minkowski_sum(const SetRep& lhs, const SetRep& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("minkowski_sum", lhs.dim(), rhs.dim());
  if (lhs.is_empty()) return lhs;
  if (rhs.is_empty()) return rhs;
  const auto a = lhs.layers();
  const auto b = rhs.layers();
  if (a.cone && b.cone && !(*a.cone == *b.cone)) {
    throw PreconditionError("minkowski_sum of sets with different cone layers is not supported");
  }
  std::vector<Vector> sums;
  sums.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) sums.push_back(a.at(i) + b.at(j));
  }
  SetRep out = SetRep::enlargement(SetRep::points(std::move(sums)), a.radius + b.radius);
  if (const Cone* c = a.cone ? a.cone : b.cone) out = SetRep::plus_cone(out, *c);
  return out;
}

// --- excess -----------------------------------------------------------------

namespace {

struct Sampler {
  const SetRep& target;
  SetRep::Layers target_layers;
  const Cone* source_cone;
  ExcessValue result{-kInf, std::nullopt, ExcessKind::SampledLowerBound, 0};

  void visit(const Vector& p) {
    const double d = dist_to_set(p, target);
    ++result.samples;
    if (d > result.value) {
      result.value = d;
      result.attained_at = p;
    }
  }

  void visit_with_cone(const Vector& base, const Vector& dir) {
    visit(base);
    if (!source_cone) return;
    const Vector along = project_to_cone(dir, *source_cone);
    if (along.norm() == 0.0) return;
    for (double t : {1.0, 10.0, 100.0, 1000.0}) visit(base + t * along);
  }

  // Outward directions from generator g: away from the nearest point of the
  // target, and away from the target's cone.
  std::vector<Vector> hints(const Vector& g) const {
    std::vector<Vector> out;
    auto push = [&](const Vector& v) {
      const double n = v.norm();
      if (n > 1e-300) out.push_back(v / n);
    };
    double best = kInf;
    Vector nearest;
    for (std::size_t j = 0; j < target_layers.size(); ++j) {
      Vector q = nearest_in_translate(g, target_layers.at(j), target_layers.cone);
      const double d = (g - q).norm();
      if (d < best) {
        best = d;
        nearest = std::move(q);
      }
    }
    if (best < kInf) push(g - nearest);
    if (target_layers.cone) push(g - project_to_cone(g, *target_layers.cone));
    return out;
  }

  void run(const SetRep::Layers& source, const std::vector<Vector>& dirs, bool use_hints) {
    for (std::size_t i = 0; i < source.size(); ++i) {
      const Vector& g = source.at(i);
      std::vector<Vector> local = dirs;
      if (use_hints) {
        for (auto& h : hints(g)) local.push_back(std::move(h));
      }
      visit(g);
      for (const auto& d : local) {
        const Vector base = source.radius > 0.0 ? Vector(g + source.radius * d) : g;
        visit_with_cone(base, d);
      }
    }
  }
};

}  // namespace

ExcessValue excess(const SetRep& source, const SetRep& target, const ExcessOptions& options) {
  if (source.dim() != target.dim()) throw DimensionMismatch("excess", source.dim(), target.dim());
  if (source.is_empty()) return {-kInf, std::nullopt, ExcessKind::VacuousSource, 0};
  if (target.is_empty()) return {kInf, std::nullopt, ExcessKind::EmptyTarget, 0};

  const auto src = source.layers();
  const auto tgt = target.layers();
  const Cone* source_cone = src.cone;
  if (source_cone && tgt.cone && *source_cone == *tgt.cone) source_cone = nullptr;

  if (!source_cone) {
    if (src.radius == 0.0) {
      ExcessValue out{-kInf, std::nullopt, ExcessKind::Exact, src.size()};
      for (std::size_t i = 0; i < src.size(); ++i) {
        const double d = dist_to_set(src.at(i), target);
        if (d > out.value) {
          out.value = d;
          out.attained_at = src.at(i);
        }
      }
      return out;
    }
    if (tgt.size() == 1) {
      // Convex target K: exc(B(g, r), K) = dist(g, K) + r for g outside K.
      double best = 0.0;
      std::optional<Vector> where;
      for (std::size_t i = 0; i < src.size(); ++i) {
        const Vector& g = src.at(i);
        const double d = dist_to_set(g, target);
        if (d > best) {
          const Vector q = nearest_in_translate(g, tgt.at(0), tgt.cone);
          const Vector normal = g - q;
          if (normal.norm() > 0.0) {
            best = d;
            where = g + (src.radius / normal.norm()) * normal;
          }
        }
      }
      if (where) return {best + src.radius, where, ExcessKind::Exact, src.size()};
    }
  }

  const int dim = source.dim();
  Sampler sampler{target, tgt, source_cone};
  sampler.run(src, sphere_directions(dim, options.samples, options.seed), true);
  return sampler.result;
}

ExcessValue excess_to_cone(const SetRep& set, const Cone& cone, const ExcessOptions& options) {
  return excess(set, SetRep::cone(cone), options);
}

ExcessValue sampled_excess(const SetRep& source, const SetRep& target, const std::vector<Vector>& directions) {
  if (source.dim() != target.dim()) throw DimensionMismatch("sampled_excess", source.dim(), target.dim());
  if (source.is_empty()) return {-kInf, std::nullopt, ExcessKind::VacuousSource, 0};
  if (target.is_empty()) return {kInf, std::nullopt, ExcessKind::EmptyTarget, 0};
  const auto src = source.layers();
  Sampler sampler{target, target.layers(), src.cone};
  sampler.run(src, directions, false);
  return sampler.result;
}

}  // namespace genequo
