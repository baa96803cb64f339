#include "genequo/cli/spec.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "genequo/cli/expression.hpp"
#include "genequo/error.hpp"

namespace genequo::cli {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const char* type_name(const Json& v) { return v.type_name(); }

}  // namespace

double as_number(const Json& value, const std::string& path) {
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (!value.is_number()) throw InputError(path, std::string("expected a number, got ") + type_name(value));
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw InputError(path, "expected a finite number");
  return v;
}

Vector as_vector(const Json& value, const std::string& path, long dim) {
  if (!value.is_array()) throw InputError(path, std::string("expected an array of numbers, got ") + type_name(value));
  if (dim >= 0 && static_cast<long>(value.size()) != dim) {
    throw InputError(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(value.size()));
  }
  if (value.empty()) throw InputError(path, "expected a nonempty array");
  Vector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) out[static_cast<Eigen::Index>(i)] = as_number(value[i], index(path, i));
  return out;
}

Fields::Fields(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) {
    throw InputError(path_, std::string("expected an object, got ") + type_name(object_));
  }
}

bool Fields::has(const std::string& key) const { return object_.contains(key) && !object_.at(key).is_null(); }

std::string Fields::child(const std::string& key) const { return join(path_, key); }

const Json& Fields::raw(const std::string& key) const {
  if (!has(key)) throw InputError(child(key), "missing required field");
  return object_.at(key);
}

double Fields::number(const std::string& key) const { return as_number(raw(key), child(key)); }

double Fields::number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int Fields::integer(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_number_integer()) throw InputError(child(key), std::string("expected an integer, got ") + type_name(v));
  return v.get<int>();
}

int Fields::integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

bool Fields::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (!v.is_boolean()) throw InputError(child(key), std::string("expected true or false, got ") + type_name(v));
  return v.get<bool>();
}

std::string Fields::string(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_string()) throw InputError(child(key), std::string("expected a string, got ") + type_name(v));
  return v.get<std::string>();
}

std::string Fields::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

Vector Fields::vector(const std::string& key, long dim) const { return as_vector(raw(key), child(key), dim); }

std::vector<double> Fields::numbers(const std::string& key) const {
  const Vector v = vector(key);
  return {v.data(), v.data() + v.size()};
}

std::vector<Vector> Fields::points(const std::string& key, long dim) const {
  const Json& v = raw(key);
  const std::string p = child(key);
  if (!v.is_array() || v.empty()) throw InputError(p, "expected a nonempty array of points");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_vector(v[i], index(p, i), dim));
  return out;
}

Matrix Fields::matrix(const std::string& key, long cols) const {
  const Json& v = raw(key);
  const std::string p = child(key);
  if (!v.is_array() || v.empty()) throw InputError(p, "expected a nonempty array of rows");
  if (cols < 0) {
    if (!v[0].is_array()) throw InputError(index(p, 0), "expected a row of numbers");
    cols = static_cast<long>(v[0].size());
  }
  Matrix out(static_cast<Eigen::Index>(v.size()), cols);
  for (std::size_t i = 0; i < v.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = as_vector(v[i], index(p, i), cols);
  return out;
}

Fields Fields::object(const std::string& key) const { return Fields(raw(key), child(key)); }

namespace {

Cone parse_cone(const Fields& f) {
  const std::string type = f.string("type");
  if (type == "orthant") {
    const int dim = f.integer("dimension");
    if (dim < 1) throw InputError(f.child("dimension"), "must be at least 1");
    return Cone::orthant(dim);
  }
  if (type == "nonneg_half_line") return Cone::nonneg_half_line();
  if (type == "nonpos_half_line") return Cone::nonpos_half_line();
  if (type == "polyhedral") return Cone::polyhedral(f.matrix("matrix"));
  throw InputError(f.child("type"),
                   "unknown cone type '" + type + "' (orthant, nonneg_half_line, nonpos_half_line, polyhedral)");
}

std::vector<Expression> parse_expressions(const Fields& f, const std::string& key,
                                          const std::vector<std::string>& vars, long count = -1) {
  const Json& v = f.raw(key);
  const std::string p = f.child(key);
  if (!v.is_array() || v.empty()) throw InputError(p, "expected a nonempty array of expression strings");
  if (count >= 0 && static_cast<long>(v.size()) != count) {
    throw InputError(p, "expected " + std::to_string(count) + " expressions, got " + std::to_string(v.size()));
  }
  std::vector<Expression> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw InputError(index(p, i), "expected an expression string");
    out.push_back(Expression::parse(v[i].get<std::string>(), vars, index(p, i)));
  }
  return out;
}

VectorFunction to_function(std::vector<Expression> components) {
  return [components = std::move(components)](const Vector& x) {
    Vector y(static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) y[static_cast<Eigen::Index>(i)] = components[i].eval(x);
    return y;
  };
}

SetValuedMap parse_mapping(const Fields& f, int n, const Cone& cone, std::string* type_out) {
  const std::string type = f.string("type");
  if (type_out) *type_out = type;
  const int m = cone.dim();
  const auto vars = domain_variables(n);
  if (type == "affine_plus_cone" || type == "linear") {
    const Matrix lambda = f.matrix("matrix", n);
    if (lambda.rows() != m) {
      throw InputError(f.child("matrix"), "expected " + std::to_string(m) + " rows to match the cone dimension, got " +
                                              std::to_string(lambda.rows()));
    }
    if (type == "linear") return linear_map(lambda);
    std::optional<Vector> offset;
    if (f.has("offset")) offset = f.vector("offset", m);
    return affine_plus_cone(lambda, cone, offset);
  }
  if (type == "single_valued") {
    return single_valued(to_function(parse_expressions(f, "components", vars, m)), n, m);
  }
  if (type == "image_shift") {
    auto fn = to_function(parse_expressions(f, "components", vars, m));
    return image_shift(fn, f.points("feasible", n), m);
  }
  if (type == "semi_infinite") {
    if (m != 1) throw InputError(f.child("type"), "semi_infinite maps need a one-dimensional cone");
    const auto grid = f.points("index_grid");
    const long k = grid.front().size();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i].size() != k) throw InputError(index(f.child("index_grid"), i), "inconsistent index dimension");
    }
    std::vector<std::string> tv;
    for (long i = 1; i <= k; ++i) tv.push_back("t" + std::to_string(i));
    tv.insert(tv.end(), vars.begin(), vars.end());
    const Expression g = Expression::parse(f.string("expression"), tv, f.child("expression"));
    auto fn = [g, k, n](const Vector& t, const Vector& x) {
      Vector v(k + n);
      v << t, x;
      return g.eval(v);
    };
    return semi_infinite(fn, grid, n);
  }
  if (type == "vi_residual") {
    if (m != 1) throw InputError(f.child("type"), "vi_residual maps need a one-dimensional cone");
    return vi_residual(to_function(parse_expressions(f, "gradient", vars, n)), f.points("feasible", n));
  }
  if (type == "sum") {
    const Json& terms = f.raw("terms");
    const std::string p = f.child("terms");
    if (!terms.is_array() || terms.size() < 2) throw InputError(p, "expected at least two terms");
    std::optional<SetValuedMap> acc;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      SetValuedMap term = parse_mapping(Fields(terms[i], index(p, i)), n, cone, nullptr);
      if (!acc) {
        acc = std::move(term);
        continue;
      }
      try {
        acc = sum(*acc, term);
      } catch (const Error& e) {
        throw InputError(index(p, i), e.what());
      }
    }
    return *acc;
  }
  throw InputError(f.child("type"), "unknown mapping type '" + type +
                                        "' (affine_plus_cone, linear, single_valued, image_shift, semi_infinite, "
                                        "vi_residual, sum)");
}

}  // namespace

ProblemSpec parse_spec(const Json& document) {
  const Fields root(document, "");
  ProblemSpec spec;
  const int version = root.integer("format_version");
  if (version != kFormatVersion) {
    throw InputError("format_version", "unsupported version " + std::to_string(version) + ", expected " +
                                           std::to_string(kFormatVersion));
  }

  const Fields domain = root.object("domain");
  spec.dimension = domain.integer("dimension");
  if (spec.dimension < 1) throw InputError("domain.dimension", "must be at least 1");
  spec.box = DomainBox::unbounded(spec.dimension);
  if (domain.has("box")) {
    const Fields box = domain.object("box");
    spec.box.lower = box.vector("lower", spec.dimension);
    spec.box.upper = box.vector("upper", spec.dimension);
    for (int i = 0; i < spec.dimension; ++i) {
      if (!(spec.box.lower[i] <= spec.box.upper[i])) {
        throw InputError(box.child("upper") + "[" + std::to_string(i) + "]", "upper bound below lower bound");
      }
    }
  }

  try {
    spec.cone = parse_cone(root.object("cone"));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError("cone", e.what());
  }

  if (root.has("mapping")) {
    try {
      spec.map = parse_mapping(root.object("mapping"), spec.dimension, spec.cone, &spec.mapping_type)
                     .with_box(spec.box);
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError("mapping", e.what());
    }
  }

  if (root.has("objective")) {
    spec.objective_text = root.string("objective");
    const Expression e = Expression::parse(spec.objective_text, domain_variables(spec.dimension), "objective");
    spec.objective = [e](const Vector& x) { return e.eval(x); };
  }
  if (root.has("solution")) spec.solution = root.vector("solution", spec.dimension);

  if (root.has("certificate")) {
    const Fields c = root.object("certificate");
    spec.certificate.method = c.string("method");
    const auto& m = spec.certificate.method;
    if (m != "linear" && m != "local" && m != "manual" && m != "estimate") {
      throw InputError(c.child("method"), "unknown method '" + m + "' (linear, local, manual, estimate)");
    }
    if (c.has("a")) spec.certificate.a = c.number("a");
    if (c.has("delta")) {
      spec.certificate.delta = c.number("delta");
      if (!(*spec.certificate.delta > 0.0)) throw InputError(c.child("delta"), "must be positive");
    }
    if (c.has("center")) spec.certificate.center = c.vector("center", spec.dimension);
    if (m == "manual" && !spec.certificate.a) throw InputError(c.child("a"), "missing required field");
    if (spec.certificate.a && !(*spec.certificate.a > 1.0)) throw InputError(c.child("a"), "must exceed 1");
  }

  if (root.has("parameters")) {
    spec.parameters = root.raw("parameters");
    const Fields p(spec.parameters, "parameters");
    if (p.has("seed")) {
      const Json& s = p.raw("seed");
      if (!s.is_number_unsigned()) throw InputError("parameters.seed", "expected a nonnegative integer");
      spec.seed = s.get<std::uint64_t>();
    }
  }
  return spec;
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("--spec", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json document;
  try {
    document = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw InputError("--spec", std::string("malformed JSON: ") + e.what());
  }
  return parse_spec(document);
}

}  // namespace genequo::cli
