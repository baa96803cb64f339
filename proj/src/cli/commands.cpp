#include "genequo/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "genequo/error.hpp"
#include "genequo/penalty.hpp"
#include "genequo/solver.hpp"
#include "genequo/vecopt.hpp"

namespace genequo::cli {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string vec(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + ")";
}

std::string columns(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    s += (i ? " " : "") + std::string(buf);
  }
  return s;
}

std::string column(double v) {
  if (!std::isfinite(v)) return num(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Source residual_source(const Residual& r) {
  return r.exactness == Exactness::Exact ? Source::ClosedForm : Source::Sampled;
}

Fields params(const ProblemSpec& spec) { return Fields(spec.parameters, "parameters"); }

const SetValuedMap& require_map(const ProblemSpec& spec) {
  if (!spec.map) throw InputError("mapping", "missing required field");
  return *spec.map;
}

Vector sample_point(Rng& rng, const ProblemSpec& spec) {
  if (!spec.box.bounded()) throw InputError("domain.box", "sampling needs a bounded box");
  return rng.in_box(spec.box.lower, spec.box.upper);
}

/// parameters.region ({lower, upper} or {center, radius}), else the domain box.
Region sampling_region(const ProblemSpec& spec) {
  const Fields p = params(spec);
  if (p.has("region")) {
    const Fields r = p.object("region");
    if (r.has("center")) {
      const double radius = r.number("radius");
      if (!(radius > 0.0)) throw InputError(r.child("radius"), "must be positive");
      return Region::ball(r.vector("center", spec.dimension), radius);
    }
    const Vector lower = r.vector("lower", spec.dimension);
    const Vector upper = r.vector("upper", spec.dimension);
    if ((upper.array() < lower.array()).any()) throw InputError(r.child("upper"), "upper bound below lower bound");
    return Region::box(lower, upper);
  }
  if (!spec.box.bounded()) throw InputError("parameters.region", "sampling needs a region or a bounded domain box");
  return Region::box(spec.box.lower, spec.box.upper);
}

Vector sample_region(Rng& rng, const Region& region) {
  return region.center ? rng.in_ball(*region.center, region.radius) : rng.in_box(region.lower, region.upper);
}

double region_scale(const Region& region) {
  if (region.center) return region.radius;
  return std::max(1e-12, 0.5 * (region.upper - region.lower).maxCoeff());
}

struct ResolvedCertificate {
  std::optional<IncreaseCertificate> cert;
  std::string refusal;
  Json info = Json::object();
  Source source = Source::Certificate;
  std::optional<IncreaseEstimate> estimate;
};

ResolvedCertificate resolve_certificate(const ProblemSpec& spec) {
  const CertificateRequest& req = spec.certificate;
  if (req.method.empty()) throw InputError("certificate", "missing required field");
  ResolvedCertificate out;
  out.info["method"] = req.method;
  const SetValuedMap& map = require_map(spec);
  const Fields p = params(spec);

  if (req.method == "linear") {
    const auto& matrix = map.metadata().matrix;
    if (!matrix) throw InputError("certificate.method", "linear certificates need an affine_plus_cone or linear mapping");
    const CertifyOutcome c = certify_linear_orthant(*matrix, spec.cone);
    out.info["openness"] = tagged(c.openness, Source::ClosedForm);
    out.cert = c.certificate;
    out.refusal = c.refusal;
  } else if (req.method == "local") {
    if (map.kind() != MapKind::SingleValued) {
      throw InputError("certificate.method", "local certificates need a single_valued mapping");
    }
    const std::optional<Vector> center = req.center ? req.center : spec.solution;
    if (!center) throw InputError("certificate.center", "missing required field");
    LocalCertifyOptions opts;
    opts.seed = spec.seed;
    if (req.delta) opts.initial_delta = *req.delta;
    const CertifyOutcome c = certify_local_nonlinear(map.metadata().base_function, *center, spec.cone, opts);
    out.info["openness"] = tagged(c.openness, Source::Sampled);
    out.info["center"] = tagged(*center, Source::ClosedForm);
    out.cert = c.certificate;
    out.refusal = c.refusal;
  } else if (req.method == "manual") {
    IncreaseCertificate cert;
    cert.a = *req.a;
    if (req.delta) cert.delta = *req.delta;
    cert.center = req.center ? req.center : (req.delta ? spec.solution : std::nullopt);
    cert.provenance = Provenance::Empirical;
    out.cert = cert;
  } else {
    EstimateOptions opts;
    opts.seed = spec.seed;
    opts.trials = p.integer("trials", opts.trials);
    opts.a_max = p.number("a_max", opts.a_max);
    opts.inclusion.seed = spec.seed;
    if (opts.trials < 1) throw InputError("parameters.trials", "must be positive");
    if (!(opts.a_max > 1.0)) throw InputError("parameters.a_max", "must exceed 1");
    const Region region = req.center && req.delta ? Region::ball(*req.center, *req.delta) : sampling_region(spec);
    out.estimate = estimate_increase_bound(map, spec.cone, region, opts);
    out.source = Source::Sampled;
    out.info["bracket"] = {{"low", tagged(out.estimate->low, Source::Sampled)},
                           {"high", tagged(out.estimate->high, Source::Sampled)},
                           {"capped", out.estimate->capped}};
    out.info["trials"] = tagged_count(out.estimate->trials, Source::Sampled);
    if (out.estimate->low > 1.0) {
      IncreaseCertificate cert;
      cert.a = out.estimate->low;
      if (req.delta) cert.delta = *req.delta;
      cert.center = req.center;
      cert.provenance = Provenance::Empirical;
      out.cert = cert;
    } else {
      out.refusal = "no sampled evidence of a rate above 1";
    }
  }
  if (out.cert) {
    out.info["a"] = tagged(out.cert->a, out.source);
    out.info["delta"] = tagged(out.cert->delta, out.source);
    out.info["provenance"] = to_string(out.cert->provenance);
    out.info["witness"] = static_cast<bool>(out.cert->witness);
  } else {
    out.info["refusal"] = out.refusal;
  }
  return out;
}

Json base_report(const std::string& command, const ProblemSpec& spec) {
  Json r = Json::object();
  r["format_version"] = kFormatVersion;
  r["command"] = command;
  r["seed"] = spec.seed;
  r["cone"] = spec.cone.name();
  if (spec.map) r["mapping"] = spec.mapping_type;
  return r;
}

std::vector<Vector> initial_points(const Fields& p, int n) {
  const Json& v = p.raw("initial");
  if (v.is_array() && !v.empty() && v[0].is_array()) return p.points("initial", n);
  return {p.vector("initial", n)};
}

}  // namespace

std::string to_string(Source source) {
  switch (source) {
    case Source::ClosedForm:
      return "closed-form";
    case Source::Sampled:
      return "sampled";
    case Source::Certificate:
      return "certificate";
  }
  return "unknown";
}

Json tagged(double value, Source source) { return {{"provenance", to_string(source)}, {"value", json_number(value)}}; }

Json tagged(const Vector& value, Source source) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < value.size(); ++i) arr.push_back(json_number(value[i]));
  return {{"provenance", to_string(source)}, {"value", arr}};
}

Json tagged_count(long long value, Source source) { return {{"provenance", to_string(source)}, {"value", value}}; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"solve", "certify", "bounds", "penalty", "ideal"};
  return names;
}

CommandResult run_command(const std::string& command, const ProblemSpec& spec) {
  if (command == "solve") return cmd_solve(spec);
  if (command == "certify") return cmd_certify(spec);
  if (command == "bounds") return cmd_bounds(spec);
  if (command == "penalty") return cmd_penalty(spec);
  if (command == "ideal") return cmd_ideal(spec);
  throw InputError("command", "unknown command '" + command + "'");
}

CommandResult cmd_solve(const ProblemSpec& spec) {
  CommandResult result;
  result.report = base_report("solve", spec);
  const SetValuedMap& map = require_map(spec);
  const Fields p = params(spec);
  const auto starts = initial_points(p, spec.dimension);
  SolverOptions opts;
  opts.tol = p.number("tol", opts.tol);
  opts.max_iter = p.integer("max_iter", opts.max_iter);
  opts.fallback_directions = p.integer("fallback_directions", opts.fallback_directions);
  opts.seed = spec.seed;
  opts.excess.seed = spec.seed;
  if (!(opts.tol > 0.0)) throw InputError("parameters.tol", "must be positive");
  if (opts.max_iter < 0) throw InputError("parameters.max_iter", "must be nonnegative");

  const ResolvedCertificate rc = resolve_certificate(spec);
  result.report["certificate"] = rc.info;
  if (!rc.cert) {
    result.summary.push_back("certificate refused: " + rc.refusal);
    result.exit = ExitCode::VerdictFailure;
    return result;
  }
  const IncreaseCertificate& cert = *rc.cert;

  std::ostringstream plot;
  plot << "# run iteration";
  for (int i = 1; i <= spec.dimension; ++i) plot << " x" << i;
  plot << " phi_x phi_u step\n";

  Json runs = Json::array();
  int converged = 0;
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const SolveReport rep = solve(map, spec.cone, starts[k], cert, opts);
    const bool all_witness =
        std::all_of(rep.trace.begin(), rep.trace.end(), [](const TraceEntry& t) { return t.used_witness; });
    const Source path_source = all_witness ? rc.source : Source::Sampled;
    const Residual r0 = phi(map, spec.cone, starts[k], opts.excess);
    Json run = Json::object();
    run["initial"] = tagged(starts[k], Source::ClosedForm);
    run["solution"] = tagged(rep.solution, path_source);
    run["phi_initial"] = tagged(rep.phi_initial, residual_source(r0));
    run["phi_final"] = tagged(rep.phi_final, residual_source(phi(map, spec.cone, rep.solution, opts.excess)));
    run["iterations"] = tagged_count(rep.iterations, path_source);
    run["distance_traveled"] = tagged(rep.distance_traveled, path_source);
    run["distance_bound"] = tagged(rep.phi_initial / (cert.a - 1.0), rc.source);
    run["bound_ratio"] = tagged(rep.bound_ratio, rc.source);
    run["status"] = to_string(rep.status);
    if (!rep.message.empty()) run["message"] = rep.message;
    Json trace = Json::array();
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
      const TraceEntry& t = rep.trace[i];
      const double step = (t.u - t.x).norm();
      trace.push_back({{"phi_x", tagged(t.phi_x, Source::ClosedForm)},
                       {"phi_u", tagged(t.phi_u, Source::ClosedForm)},
                       {"step", tagged(step, Source::ClosedForm)},
                       {"witness", t.used_witness}});
      plot << k << ' ' << i << ' ' << columns(t.x) << ' ' << column(t.phi_x) << ' ' << column(t.phi_u) << ' '
           << column(step) << '\n';
    }
    run["trace"] = trace;
    runs.push_back(run);

    if (rep.converged()) ++converged;
    worst_ratio = std::max(worst_ratio, rep.bound_ratio);
    result.summary.push_back("run " + std::to_string(k) + ": " + to_string(rep.status) + " after " +
                             std::to_string(rep.iterations) + " iterations, phi " + num(rep.phi_initial) + " -> " +
                             num(rep.phi_final) + ", solution " + vec(rep.solution) + ", bound ratio " +
                             num(rep.bound_ratio));
  }
  result.report["runs"] = runs;
  const bool bound_ok = worst_ratio <= 1.0 + 1e-6;
  result.report["summary"] = {{"runs", tagged_count(static_cast<long long>(starts.size()), Source::ClosedForm)},
                              {"converged", tagged_count(converged, Source::ClosedForm)},
                              {"max_bound_ratio", tagged(worst_ratio, rc.source)},
                              {"bound_respected", bound_ok}};
  result.summary.insert(result.summary.begin(), "solve with a = " + num(cert.a) + " (" + rc.info["method"].get<std::string>() + ")");
  result.plot = plot.str();
  if (converged != static_cast<int>(starts.size()) || !bound_ok) result.exit = ExitCode::VerdictFailure;
  return result;
}

CommandResult cmd_certify(const ProblemSpec& spec) {
  CommandResult result;
  result.report = base_report("certify", spec);
  const SetValuedMap& map = require_map(spec);
  const Fields p = params(spec);
  const int pairs = p.integer("validation_pairs", 100);
  if (pairs < 0) throw InputError("parameters.validation_pairs", "must be nonnegative");

  const ResolvedCertificate rc = resolve_certificate(spec);
  result.report["certificate"] = rc.info;
  std::ostringstream plot;

  if (rc.estimate) {
    Json levels = Json::array();
    plot << "# a refuted\n";
    for (const auto& level : rc.estimate->levels) {
      levels.push_back({{"a", tagged(level.a, Source::Sampled)}, {"refuted", level.refuted}});
      plot << column(level.a) << ' ' << (level.refuted ? 1 : 0) << '\n';
    }
    result.report["levels"] = levels;
    result.summary.push_back("estimated increase bound in [" + num(rc.estimate->low) + ", " +
                             num(rc.estimate->high) + "]" + (rc.estimate->capped ? " (capped)" : ""));
  }
  if (!rc.cert) {
    result.summary.push_back("certificate refused: " + rc.refusal);
    result.plot = plot.str();
    result.exit = ExitCode::VerdictFailure;
    return result;
  }
  const IncreaseCertificate& cert = *rc.cert;
  result.summary.push_back("rate a = " + num(cert.a) + ", delta = " + num(cert.delta) + " (" +
                           to_string(cert.provenance) + ")");

  // Spot-check the inclusion at sampled (x, r) pairs inside the certificate scope.
  Rng rng(spec.seed);
  InclusionOptions inc;
  inc.seed = spec.seed;
  inc.witness = cert.witness;
  inc.mode = cert.witness ? CandidateMode::WitnessOnly : CandidateMode::WitnessThenSampled;
  const bool local = !cert.is_global() && cert.center;
  const Region region = local ? Region::ball(*cert.center, cert.delta) : pairs > 0 ? sampling_region(spec) : Region{};
  const double scale = cert.is_global() ? region_scale(region) : cert.delta;
  int certified = 0;
  int refuted = 0;
  int inconclusive = 0;
  if (!rc.estimate) plot << "# x r verdict\n";
  for (int i = 0; i < pairs; ++i) {
    const Vector x = sample_region(rng, region);
    const double r = scale * std::pow(10.0, rng.uniform(-3.0, 0.0)) * (cert.is_global() ? 1.0 : 0.999);
    const InclusionResult ir = check_increase_inclusion(map, spec.cone, x, r, cert.a, inc);
    switch (ir.verdict) {
      case Verdict::Certified:
        ++certified;
        break;
      case Verdict::Refuted:
        ++refuted;
        break;
      case Verdict::Inconclusive:
        ++inconclusive;
        break;
    }
    if (!rc.estimate) plot << columns(x) << ' ' << column(r) << ' ' << to_string(ir.verdict) << '\n';
  }
  result.report["validation"] = {{"pairs", tagged_count(pairs, Source::Sampled)},
                                 {"certified", tagged_count(certified, Source::Sampled)},
                                 {"refuted", tagged_count(refuted, Source::Sampled)},
                                 {"inconclusive", tagged_count(inconclusive, Source::Sampled)}};
  result.summary.push_back("inclusion spot checks: " + std::to_string(certified) + " certified, " +
                           std::to_string(refuted) + " refuted, " + std::to_string(inconclusive) +
                           " inconclusive of " + std::to_string(pairs));
  if (refuted > 0) result.exit = ExitCode::VerdictFailure;

  if (p.has("beta")) {
    const double beta = p.number("beta");
    if (!(beta >= 0.0)) throw InputError("parameters.beta", "must be nonnegative");
    Json pert = {{"beta", tagged(beta, Source::ClosedForm)}};
    if (!cert.is_global()) {
      pert["refusal"] = "perturbation needs a global certificate";
      result.exit = ExitCode::VerdictFailure;
    } else if (const auto bound = perturbation_bound(cert.a, beta)) {
      pert["a"] = tagged(*bound, Source::ClosedForm);
      result.summary.push_back("perturbed rate (1 - beta) a = " + num(*bound));
    } else {
      pert["refusal"] = "beta >= 1 - 1/a";
      result.summary.push_back("perturbation refused: beta " + num(beta) + " >= 1 - 1/a = " + num(1.0 - 1.0 / cert.a));
      result.exit = ExitCode::VerdictFailure;
    }
    result.report["perturbation"] = pert;
  }
  result.plot = plot.str();
  return result;
}

CommandResult cmd_bounds(const ProblemSpec& spec) {
  CommandResult result;
  result.report = base_report("bounds", spec);
  const SetValuedMap& map = require_map(spec);
  const Fields p = params(spec);
  ExcessOptions excess;
  excess.seed = spec.seed;

  const ResolvedCertificate rc = resolve_certificate(spec);
  result.report["certificate"] = rc.info;
  if (!rc.cert) {
    result.summary.push_back("certificate refused: " + rc.refusal);
    result.exit = ExitCode::VerdictFailure;
    return result;
  }
  const double a = rc.cert->a;

  // Reference description of the solution set.
  const Fields ref = p.object("reference");
  const std::string kind = ref.string("type");
  std::optional<SolvReference> reference;
  Json ref_info = {{"type", kind}};
  Source lhs_source = Source::Sampled;
  if (kind == "grid") {
    if (!spec.box.bounded()) throw InputError("domain.box", "a grid reference needs a bounded box");
    const Vector counts = ref.vector("counts", spec.dimension);
    std::vector<int> c;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
      if (counts[i] < 1 || counts[i] != std::floor(counts[i])) {
        throw InputError(ref.child("counts") + "[" + std::to_string(i) + "]", "expected a positive integer");
      }
      c.push_back(static_cast<int>(counts[i]));
    }
    const SolutionProbe probe =
        solution_set_probe(map, spec.cone, spec.box.lower, spec.box.upper, c, kFeasibilityTolerance, excess);
    auto feasible = probe.feasible_points();
    ref_info["grid_points"] = tagged_count(static_cast<long long>(probe.points.size()), Source::Sampled);
    ref_info["feasible_points"] = tagged_count(static_cast<long long>(feasible.size()), Source::Sampled);
    reference = SolvReference::sampled(std::move(feasible));
  } else if (kind == "points") {
    auto points = ref.points("points", spec.dimension);
    ref_info["feasible_points"] = tagged_count(static_cast<long long>(points.size()), Source::ClosedForm);
    reference = SolvReference::sampled(std::move(points));
  } else {
    throw InputError(ref.child("type"), "unknown reference type '" + kind + "' (grid, points)");
  }
  result.report["reference"] = ref_info;
  if (reference->points().empty()) {
    result.summary.push_back("reference solution set is empty on the grid; no bound can hold");
    result.exit = ExitCode::VerdictFailure;
    return result;
  }

  std::ostringstream plot;
  plot << "# scope";
  for (int i = 1; i <= spec.dimension; ++i) plot << " x" << i;
  plot << " phi lhs rhs\n";
  auto emit = [&](const std::string& scope, const std::vector<BoundCheck>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back({{"x", tagged(c.x, Source::Sampled)},
                     {"phi", tagged(c.phi, Source::ClosedForm)},
                     {"lhs", tagged(c.lhs, lhs_source)},
                     {"rhs", tagged(c.rhs, rc.source)},
                     {"satisfied", c.satisfied}});
      plot << scope << ' ' << columns(c.x) << ' ' << column(c.phi) << ' ' << column(c.lhs) << ' ' << column(c.rhs)
           << '\n';
    }
    return arr;
  };

  if (p.boolean("global", true)) {
    std::vector<Vector> samples;
    if (p.has("points")) samples = p.points("points", spec.dimension);
    const int count = p.integer("samples", p.has("points") ? 0 : 200);
    if (count < 0) throw InputError("parameters.samples", "must be nonnegative");
    Rng rng(spec.seed);
    for (int i = 0; i < count; ++i) samples.push_back(sample_point(rng, spec));
    const auto checks = verify_global_error_bound(map, spec.cone, a, samples, *reference, kFeasibilityTolerance, excess);
    const auto violations = count_violations(checks);
    result.report["global"] = {{"checks", emit("global", checks)},
                               {"samples", tagged_count(static_cast<long long>(checks.size()), Source::Sampled)},
                               {"violations", tagged_count(static_cast<long long>(violations), Source::Sampled)}};
    result.summary.push_back("global bound: " + std::to_string(violations) + " violations in " +
                             std::to_string(checks.size()) + " samples");
    if (violations > 0) result.exit = ExitCode::VerdictFailure;
  }

  if (p.has("local")) {
    const Fields local = p.object("local");
    LocalBoundOptions lo;
    lo.seed = spec.seed;
    lo.initial_radius = local.number("initial_radius", lo.initial_radius);
    lo.min_radius = local.number("min_radius", lo.min_radius);
    lo.shrink = local.number("shrink", lo.shrink);
    lo.samples = local.integer("samples", lo.samples);
    lo.eps = local.number("eps", lo.eps);
    const double la = local.number("a", a);
    if (!(la > 1.0)) throw InputError(local.child("a"), "must exceed 1");
    Vector center;
    if (local.has("center")) center = local.vector("center", spec.dimension);
    else if (spec.solution) center = *spec.solution;
    else throw InputError(local.child("center"), "missing required field");
    LocalBoundReport rep;
    try {
      rep = verify_local_error_bound(map, spec.cone, center, la, *reference, lo, excess);
    } catch (const PreconditionError& e) {
      throw InputError(local.child("center"), e.what());
    }
    result.report["local"] = {{"center", tagged(center, Source::ClosedForm)},
                              {"a", tagged(la, rc.source)},
                              {"radius", tagged(rep.radius, Source::Sampled)},
                              {"confirmed", rep.confirmed},
                              {"shrinks", tagged_count(rep.shrinks, Source::Sampled)},
                              {"violations", tagged_count(static_cast<long long>(count_violations(rep.checks)),
                                                          Source::Sampled)},
                              {"checks", emit("local", rep.checks)}};
    result.summary.push_back(rep.confirmed ? "local bound confirmed on radius " + num(rep.radius)
                                           : "local bound not confirmed above radius " + num(lo.min_radius));
    if (!rep.confirmed) result.exit = ExitCode::VerdictFailure;
  }
  result.summary.insert(result.summary.begin(), "error bounds with a = " + num(a));
  result.plot = plot.str();
  return result;
}

CommandResult cmd_penalty(const ProblemSpec& spec) {
  CommandResult result;
  result.report = base_report("penalty", spec);
  const SetValuedMap& map = require_map(spec);
  if (!spec.objective) throw InputError("objective", "missing required field");
  if (!spec.solution) throw InputError("solution", "missing required field");
  const Fields p = params(spec);
  ExcessOptions excess;
  excess.seed = spec.seed;
  ConstrainedProblem problem{*spec.objective, map, spec.cone, spec.solution};
  if (!phi(map, spec.cone, *spec.solution, excess).feasible()) {
    throw InputError("solution", "the supplied solution is not feasible");
  }

  const ResolvedCertificate rc = resolve_certificate(spec);
  result.report["certificate"] = rc.info;
  if (!rc.cert) {
    result.summary.push_back("certificate refused: " + rc.refusal);
    result.exit = ExitCode::VerdictFailure;
    return result;
  }
  const double a = rc.cert->a;
  const double radius = p.number("search_radius", 1.0);
  const double resolution = p.number("resolution", 1e-3);
  if (!(radius > 0.0)) throw InputError("parameters.search_radius", "must be positive");
  if (!(resolution > 0.0)) throw InputError("parameters.resolution", "must be positive");

  double beta;
  Source beta_source;
  if (p.has("beta")) {
    beta = p.number("beta");
    if (!(beta >= 0.0)) throw InputError("parameters.beta", "must be nonnegative");
    beta_source = Source::ClosedForm;
  } else {
    beta = lipschitz_estimate(*spec.objective, *spec.solution, radius, 2000, spec.seed);
    beta_source = Source::Sampled;
  }
  const double threshold = penalty_threshold(beta, a);
  const Source threshold_source = beta_source == Source::Sampled ? Source::Sampled : rc.source;
  result.report["beta"] = tagged(beta, beta_source);
  result.report["threshold"] = tagged(threshold, threshold_source);
  result.report["threshold_is_lower_estimate"] = beta_source == Source::Sampled;
  result.report["recommended_lambda"] = tagged(recommended_lambda(beta, a), threshold_source);
  result.summary.push_back("threshold lambda* = beta/(a-1) = " + num(beta) + "/" + num(a - 1.0) + " = " +
                           num(threshold) + (beta_source == Source::Sampled ? " (beta estimated; at least)" : ""));

  const std::vector<double> lambdas = p.numbers("lambdas");
  Json sweep = Json::array();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lambda = lambdas[i];
    if (!(lambda >= 0.0)) throw InputError("parameters.lambdas[" + std::to_string(i) + "]", "must be nonnegative");
    PenaltyVerdict v;
    try {
      v = exactness_experiment(problem, lambda, radius, resolution, threshold, excess);
    } catch (const PreconditionError& e) {
      throw InputError("parameters.resolution", e.what());
    }
    const bool above = lambda > threshold && !v.threshold_boundary;
    const bool contradicts = above && !v.is_exact && beta_source == Source::ClosedForm;
    sweep.push_back({{"lambda", tagged(lambda, Source::ClosedForm)},
                     {"exact", v.is_exact},
                     {"margin", tagged(v.margin, Source::Sampled)},
                     {"minimizer", tagged(v.minimizer, Source::Sampled)},
                     {"min_value", tagged(v.min_value, Source::Sampled)},
                     {"value_at_solution", tagged(v.value_at_solution, Source::ClosedForm)},
                     {"grid_points", tagged_count(static_cast<long long>(v.grid_points), Source::Sampled)},
                     {"resolution", tagged(v.resolution, Source::ClosedForm)},
                     {"threshold_boundary", v.threshold_boundary},
                     {"above_threshold", above}});
    result.summary.push_back("lambda " + num(lambda) + ": " + (v.is_exact ? "exact" : "not exact") +
                             (v.threshold_boundary ? " (at threshold)" : "") + ", margin " + num(v.margin));
    if (contradicts) result.exit = ExitCode::VerdictFailure;
  }
  result.report["sweep"] = sweep;

  if (p.has("strict")) {
    const Fields s = p.object("strict");
    const double epsilon = s.number("epsilon");
    if (!(epsilon > 0.0)) throw InputError(s.child("epsilon"), "must be positive");
    const Vector lower = s.has("lower") ? s.vector("lower", spec.dimension) : spec.box.lower;
    const Vector upper = s.has("upper") ? s.vector("upper", spec.dimension) : spec.box.upper;
    if (!lower.allFinite() || !upper.allFinite()) throw InputError(s.child("lower"), "the strict check needs a bounded box");
    const double res = s.number("resolution", resolution);
    StrictGlobalResult g;
    try {
      g = strict_global_check(problem, epsilon, beta, a, lower, upper, res, excess);
    } catch (const PreconditionError& e) {
      throw InputError(s.child("resolution"), e.what());
    }
    result.report["strict"] = {{"epsilon", tagged(epsilon, Source::ClosedForm)},
                               {"lambda", tagged(g.lambda, threshold_source)},
                               {"minimizer", tagged(g.minimizer, Source::Sampled)},
                               {"min_value", tagged(g.min_value, Source::Sampled)},
                               {"phi_at_minimizer", tagged(g.phi_at_minimizer, Source::ClosedForm)},
                               {"strict", g.strict},
                               {"feasible", g.feasible},
                               {"feasible_grid_min", tagged(g.feasible_grid_min, Source::Sampled)},
                               {"objective_gap", tagged(g.objective_gap, Source::Sampled)},
                               {"grid_points", tagged_count(static_cast<long long>(g.grid_points), Source::Sampled)},
                               {"outcome", to_string(g.outcome)}};
    result.summary.push_back("strict check at lambda " + num(g.lambda) + ": " + to_string(g.outcome) +
                             ", minimizer " + vec(g.minimizer));
    if (g.outcome == StrictOutcome::Infeasible) result.exit = ExitCode::VerdictFailure;
  }

  std::ostringstream plot;
  if (spec.dimension == 1) {
    plot << "# x";
    for (double l : lambdas) plot << " phi_lambda=" << num(l);
    plot << '\n';
    const double c = (*spec.solution)[0];
    for (int k = 0; k <= 200; ++k) {
      Vector x = Vector::Constant(1, c - radius + 2.0 * radius * k / 200.0);
      if (!map.box().contains(x)) continue;
      plot << column(x[0]);
      for (double l : lambdas) plot << ' ' << column(penalty_value(problem, l, x, excess));
      plot << '\n';
    }
  }
  result.plot = plot.str();
  return result;
}

CommandResult cmd_ideal(const ProblemSpec& spec) {
  CommandResult result;
  result.report = base_report("ideal", spec);
  const SetValuedMap& map = require_map(spec);
  if (map.kind() != MapKind::ImageShift) throw InputError("mapping.type", "ideal needs an image_shift mapping");
  const Fields p = params(spec);
  VectorProblem problem{map.metadata().base_function, map.metadata().samples, spec.cone};

  std::optional<double> rate;
  if (!spec.certificate.method.empty()) {
    if (spec.certificate.method != "manual") {
      throw InputError("certificate.method", "ideal takes a manual rate for -f");
    }
    rate = spec.certificate.a;
  }
  const IdealReport rep = ideal_efficient_set(problem, rate);

  Json ideal = Json::array();
  bool pareto_ok = true;
  for (auto i : rep.ideal_indices) {
    const bool pareto = pareto_cross_check(problem, problem.feasible[i]);
    pareto_ok = pareto_ok && pareto;
    ideal.push_back({{"index", tagged_count(static_cast<long long>(i), Source::ClosedForm)},
                     {"point", tagged(problem.feasible[i], Source::ClosedForm)},
                     {"value", tagged(problem.f(problem.feasible[i]), Source::ClosedForm)},
                     {"pareto", pareto}});
  }
  Json residuals = Json::array();
  for (double r : rep.residuals) residuals.push_back(tagged(r, Source::ClosedForm));
  result.report["ideal_points"] = ideal;
  result.report["residuals"] = residuals;
  result.report["sample_size"] = tagged_count(static_cast<long long>(problem.feasible.size()), Source::ClosedForm);
  result.report["pointed"] = rep.pointed;
  result.report["unique_value"] = rep.unique_value;
  result.report["pareto_consistent"] = pareto_ok;
  result.report["note"] = "the feasible set is the finite sample given in the spec";
  result.summary.push_back(std::to_string(rep.ideal_indices.size()) + " ideal point(s) among " +
                           std::to_string(problem.feasible.size()));
  if (!pareto_ok || !rep.unique_value) result.exit = ExitCode::VerdictFailure;

  if (rate) {
    Json bounds = Json::object();
    bounds["a"] = tagged(*rate, Source::Certificate);
    bounds["hypothesis_failed"] = rep.hypothesis_failed;
    std::size_t violations = 0;
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
      if (!c.satisfied) ++violations;
      checks.push_back({{"index", tagged_count(static_cast<long long>(c.index), Source::ClosedForm)},
                        {"distance", tagged(c.distance, Source::ClosedForm)},
                        {"bound", tagged(c.bound, Source::Certificate)},
                        {"satisfied", c.satisfied}});
    }
    bounds["checks"] = checks;
    bounds["violations"] = tagged_count(static_cast<long long>(violations), Source::ClosedForm);
    if (p.boolean("discrete_check", false)) {
      const DiscreteIncreaseCheck d = discrete_increase_check(problem, *rate, p.integer("pairs", 100), spec.seed);
      bounds["discrete_increase"] = {{"pairs", tagged_count(d.pairs, Source::Sampled)},
                                     {"certified", tagged_count(d.certified, Source::Sampled)},
                                     {"refuted", tagged_count(d.refuted, Source::Sampled)},
                                     {"inconclusive", tagged_count(d.inconclusive, Source::Sampled)}};
    }
    result.report["bounds"] = bounds;
    if (rep.hypothesis_failed) {
      result.summary.push_back("no ideal point: the hypotheses of the distance bound fail on this data");
    } else {
      result.summary.push_back("distance bound with a = " + num(*rate) + ": " + std::to_string(violations) +
                               " violations");
    }
    if (violations > 0) result.exit = ExitCode::VerdictFailure;
  }

  std::ostringstream plot;
  plot << "# index residual ideal\n";
  for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
    const bool is_ideal = std::find(rep.ideal_indices.begin(), rep.ideal_indices.end(), i) != rep.ideal_indices.end();
    plot << i << ' ' << column(rep.residuals[i]) << ' ' << (is_ideal ? 1 : 0) << '\n';
  }
  result.plot = plot.str();
  return result;
}

std::string render_machine(const CommandResult& result) {
  Json doc = result.report;
  doc["verdict"] = result.exit == ExitCode::Success ? "ok" : "failed";
  return doc.dump(2) + "\n";
}

std::string render_human(const CommandResult& result) {
  std::string out = "genequo " + result.report.value("command", std::string("?")) + " (format " +
                    std::to_string(kFormatVersion) + ")\n";
  for (const auto& line : result.summary) out += "  " + line + "\n";
  out += result.exit == ExitCode::Success ? "verdict: ok\n" : "verdict: failed\n";
  return out;
}

}  // namespace genequo::cli
