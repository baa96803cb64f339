#include <doctest.h>

#include <cmath>

#include "genequo/error.hpp"
#include "genequo/solver.hpp"
#include "support/generators.hpp"

using namespace genequo;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector s1(double a) { return Vector::Constant(1, a); }

SetValuedMap neg_map() {
  return single_valued([](const Vector& x) { return Vector(-x); }, 1, 1, "-x");
}

SetValuedMap abs_map() {
  return single_valued([](const Vector& x) { return Vector::Constant(1, std::abs(x[0])); }, 1, 1, "|x|");
}

IncreaseCertificate manual(double a) {
  IncreaseCertificate c;
  c.a = a;
  return c;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("single step on -x reaches the solution set") {
    const StepResult s = descent_step(neg_map(), Cone::nonneg_half_line(), s1(3), manual(2.0));
    CHECK(s.phi_x == doctest::Approx(3.0));
    CHECK(s.u[0] == doctest::Approx(0.0));
    CHECK(s.phi_u == 0.0);
    CHECK_FALSE(s.used_witness);
  }

  TEST_CASE("affine step meets the contraction target") {
    const Cone c = Cone::orthant(2);
    const SetValuedMap f = affine_plus_cone(3.0 * Matrix::Identity(2, 2), c);
    const auto cert = *certify_linear_orthant(3.0 * Matrix::Identity(2, 2), c).certificate;
    const StepResult s = descent_step(f, c, v2(-1, -1), cert);
    CHECK(s.phi_x == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK(s.used_witness);
    CHECK(s.phi_u <= 2.48528137423857 + step_slack(s.phi_x));
    CHECK((s.u - v2(-1, -1)).norm() <= s.phi_x * (1 + 1e-12));
    CHECK(step_slack(0.5) == 1e-12);
    CHECK(step_slack(100.0) == doctest::Approx(1e-10));
  }

  TEST_CASE("solve respects the iteration and distance bounds") {
    const Cone c = Cone::orthant(2);
    const SetValuedMap f = affine_plus_cone(3.0 * Matrix::Identity(2, 2), c);
    const auto cert = *certify_linear_orthant(3.0 * Matrix::Identity(2, 2), c).certificate;
    const SolveReport rep = solve(f, c, v2(-1, -1), cert);
    CHECK(rep.converged());
    CHECK(rep.iterations <= 38);
    CHECK(rep.distance_traveled <= 10.242640687119284 + 1e-9);
    CHECK(rep.bound_ratio <= 1.0 + 1e-6);
    CHECK(rep.phi_final <= 1e-8);
    CHECK(rep.trace.size() == static_cast<std::size_t>(rep.iterations));
    CHECK(phi(f, c, rep.solution).value <= 1e-8);
  }

  TEST_CASE("feasible start and preconditions") {
    const Cone c = Cone::nonneg_half_line();
    const SolveReport rep = solve(neg_map(), c, s1(-1), manual(2.0));
    CHECK(rep.converged());
    CHECK(rep.iterations == 0);
    CHECK(rep.solution[0] == -1.0);
    CHECK_THROWS_AS(descent_step(neg_map(), c, s1(-1), manual(2.0)), PreconditionError);
  }

  TEST_CASE("stall and locality") {
    // A constant map cannot contract, whatever rate it is credited with.
    const SetValuedMap constant = single_valued([](const Vector&) { return s1(-1.0); }, 1, 1);
    CHECK_THROWS_AS(descent_step(constant, Cone::nonneg_half_line(), s1(0), manual(2.0)), Stall);
    CHECK(solve(constant, Cone::nonneg_half_line(), s1(0), manual(2.0)).status == SolveStatus::Stall);

    IncreaseCertificate local = manual(2.0);
    local.delta = 0.5;
    local.center = s1(0);
    CHECK_THROWS_AS(descent_step(neg_map(), Cone::nonneg_half_line(), s1(3), local), LocalityExceeded);
    CHECK(solve(neg_map(), Cone::nonneg_half_line(), s1(3), local).status == SolveStatus::LocalityExceeded);
    CHECK(descent_step(neg_map(), Cone::nonneg_half_line(), s1(0.2), local).phi_u == 0.0);
  }

  TEST_CASE("global error bound") {
    const SolvReference ref = SolvReference::analytic([](const Vector& x) { return std::max(0.0, x[0]); });
    const auto checks =
        verify_global_error_bound(neg_map(), Cone::nonneg_half_line(), 2.0, {s1(-2), s1(0.5), s1(3)}, ref);
    REQUIRE(checks.size() == 3);
    CHECK(count_violations(checks) == 0);
    CHECK(checks[2].lhs == doctest::Approx(3.0));
    CHECK(checks[2].rhs == doctest::Approx(3.0));

    // Claiming a = 3 halves the right-hand side and breaks the bound.
    CHECK(count_violations(verify_global_error_bound(neg_map(), Cone::nonneg_half_line(), 3.0, {s1(3)}, ref)) == 1);

    const SolvReference sampled = SolvReference::sampled({s1(0), s1(-1)});
    CHECK_FALSE(sampled.exact());
    CHECK(sampled.distance(s1(2)) == doctest::Approx(2.0));
  }

  TEST_CASE("local error bound") {
    const SolvReference ref = SolvReference::sampled({s1(0)});
    const LocalBoundReport rep = verify_local_error_bound(abs_map(), Cone::nonpos_half_line(), s1(0), 1.5, ref);
    CHECK(rep.confirmed);
    CHECK(rep.radius == 1.0);
    CHECK(rep.shrinks == 0);
    CHECK_THROWS_AS(verify_local_error_bound(abs_map(), Cone::nonpos_half_line(), s1(1), 1.5, ref),
                    PreconditionError);

    // dist <= |x| / (a - 1) fails for a = 3 at every radius.
    LocalBoundOptions opts;
    opts.min_radius = 1e-3;
    const LocalBoundReport bad =
        verify_local_error_bound(abs_map(), Cone::nonpos_half_line(), s1(0), 3.0, ref, opts);
    CHECK_FALSE(bad.confirmed);
  }

  TEST_CASE("solution set probe") {
    const Cone c = Cone::orthant(2);
    const SolutionProbe p =
        solution_set_probe(affine_plus_cone(3.0 * Matrix::Identity(2, 2), c), c, v2(-1, -1), v2(1, 1), {3, 3});
    REQUIRE(p.points.size() == 9);
    CHECK(p.feasible_points().size() == 4);
    for (std::size_t i = 0; i < p.points.size(); ++i) CHECK(p.mask[i] == (p.points[i].minCoeff() >= 0.0));
  }

  TEST_CASE("property: solves of certified affine systems obey every bound") {
    Rng rng(59);
    const Cone c = Cone::orthant(2);
    int runs = 0;
    for (int i = 0; i < 100; ++i) {
      Matrix lambda = gen::uniform_matrix(rng, 2, 2, -0.5, 0.5);
      lambda += rng.uniform(2.6, 5.0) * Matrix::Identity(2, 2);
      const CertifyOutcome out = certify_linear_orthant(lambda, c);
      if (!out) continue;
      ++runs;
      const IncreaseCertificate& cert = *out.certificate;
      const SetValuedMap f = affine_plus_cone(lambda, c);
      const Vector x0 = gen::outside_orthant(rng, 2, 5.0);
      const SolveReport rep = solve(f, c, x0, cert);
      REQUIRE(rep.converged());
      CHECK(rep.bound_ratio <= 1.0 + 1e-6);
      const double slack = step_slack(rep.phi_initial);
      for (const auto& t : rep.trace) {
        CHECK((t.u - t.x).norm() <= t.phi_x * (1 + 1e-12));
        CHECK(t.phi_u <= std::max(0.0, 2.0 - cert.a) * t.phi_x + slack);
      }
      const double bound = std::log(rep.phi_initial / 1e-8) / std::log(1.0 / (2.0 - cert.a));
      CHECK(rep.iterations <= static_cast<int>(std::ceil(bound)) + 1);

      // Solv = {x : Λx >= 0}; the distance to it is a polyhedral cone distance.
      const Cone solv = Cone::polyhedral(-lambda);
      const SolvReference ref = SolvReference::analytic([solv](const Vector& x) { return dist_to_cone(x, solv); });
      CHECK(ref.distance(x0) <= rep.distance_traveled + 1e-9);
      std::vector<Vector> samples;
      for (int k = 0; k < 20; ++k) samples.push_back(gen::uniform_vector(rng, 2, -5, 5));
      CHECK(count_violations(verify_global_error_bound(f, c, cert.a, samples, ref)) == 0);
    }
    CHECK(runs > 50);
  }
}
