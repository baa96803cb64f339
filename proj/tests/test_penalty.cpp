#include <doctest.h>

#include <cmath>

#include "genequo/error.hpp"
#include "genequo/penalty.hpp"
#include "support/generators.hpp"

using namespace genequo;

namespace {

Vector s1(double a) { return Vector::Constant(1, a); }

// min βx s.t. -kx <= 0. The map -kx has exact increase bound 1 + k over
// (-inf, 0], so the threshold β / (a - 1) is β / k.
ConstrainedProblem scaled_problem(double beta, double k) {
  return {[beta](const Vector& x) { return beta * x[0]; },
          single_valued([k](const Vector& x) { return Vector(-k * x); }, 1, 1), Cone::nonpos_half_line(), s1(0)};
}

}  // namespace

TEST_SUITE("penalty") {
  TEST_CASE("penalty value") {
    const ConstrainedProblem p = scaled_problem(1.0, 1.0);
    CHECK(penalty_value(p, 1.5, s1(-2)) == doctest::Approx(1.0));
    CHECK(penalty_value(p, 1.5, s1(2)) == doctest::Approx(2.0));
  }

  TEST_CASE("lipschitz estimate") {
    const ScalarFunction lin = [](const Vector& x) { return 3 * x[0] - x[1]; };
    const double l = lipschitz_estimate(lin, Vector::Zero(2), 1.0);
    CHECK(l <= 3.1622776601683795 + 1e-9);
    CHECK(l >= 0.99 * 3.1622776601683795);
    CHECK(lipschitz_estimate([](const Vector& x) { return x[0]; }, s1(0), 1.0) == doctest::Approx(1.0));
  }

  TEST_CASE("thresholds") {
    CHECK(penalty_threshold(3.0, std::sqrt(2.0)) == doctest::Approx(7.242640687119284));
    CHECK(penalty_threshold(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(recommended_lambda(1.0, 2.0) == doctest::Approx(1.25));
    CHECK_THROWS_AS(penalty_threshold(1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(penalty_threshold(-1.0, 2.0), PreconditionError);
    CHECK(grid_slack(0.0) == doctest::Approx(1e-9));
  }

  TEST_CASE("exactness around the threshold") {
    const ConstrainedProblem p = scaled_problem(1.0, 1.0);
    const double th = penalty_threshold(1.0, 2.0);

    const PenaltyVerdict below = exactness_experiment(p, 0.5, 5.0, 1e-3, th);
    CHECK_FALSE(below.is_exact);
    CHECK(below.margin < 0.0);
    CHECK(below.minimizer[0] == doctest::Approx(-5.0));
    CHECK_FALSE(below.threshold_boundary);

    const PenaltyVerdict at = exactness_experiment(p, 1.0, 5.0, 1e-3, th);
    CHECK(at.threshold_boundary);
    CHECK(at.is_exact);

    const PenaltyVerdict above = exactness_experiment(p, 1.5, 5.0, 1e-3, th);
    CHECK(above.is_exact);
    CHECK(above.value_at_solution == 0.0);
    CHECK(above.minimizer[0] == doctest::Approx(0.0));

    ConstrainedProblem infeasible = p;
    infeasible.solution = s1(-1);
    CHECK_THROWS_AS(exactness_experiment(infeasible, 1.5, 1.0, 1e-2), PreconditionError);
    infeasible.solution.reset();
    CHECK_THROWS_AS(exactness_experiment(infeasible, 1.5, 1.0, 1e-2), PreconditionError);
  }

  TEST_CASE("strict global check") {
    const ConstrainedProblem p = scaled_problem(1.0, 1.0);
    const StrictGlobalResult r = strict_global_check(p, 0.5, 1.0, 2.0, s1(-2), s1(2), 1e-2);
    CHECK(r.lambda == doctest::Approx(1.5));
    CHECK(r.outcome == StrictOutcome::Solves);
    CHECK(r.strict);
    CHECK(r.feasible);
    CHECK(r.minimizer[0] == doctest::Approx(0.0));
    CHECK(r.objective_gap == doctest::Approx(0.0));
  }

  TEST_CASE("property: the threshold is sharp") {
    Rng rng(61);
    for (int i = 0; i < 40; ++i) {
      const double beta = rng.uniform(0.2, 3.0);
      const double k = rng.uniform(0.5, 3.0);
      const ConstrainedProblem p = scaled_problem(beta, k);
      const double th = penalty_threshold(beta, 1.0 + k);
      CHECK(th == doctest::Approx(beta / k));
      for (double factor : {0.25, 0.5, 0.9, 1.1, 1.5, 4.0}) {
        const PenaltyVerdict v = exactness_experiment(p, factor * th, 2.0, 1e-3, th);
        CHECK(v.is_exact == (factor > 1.0));
      }
    }
  }

  TEST_CASE("property: strict minimizers above the threshold solve the problem") {
    Rng rng(67);
    for (int i = 0; i < 20; ++i) {
      const double beta = rng.uniform(0.2, 3.0);
      const double k = rng.uniform(0.5, 3.0);
      const double eps = rng.uniform(0.1, 1.0);
      const StrictGlobalResult r =
          strict_global_check(scaled_problem(beta, k), eps, beta, 1.0 + k, s1(-1.5), s1(1.5), 1e-2);
      CHECK(r.outcome == StrictOutcome::Solves);
      CHECK(r.phi_at_minimizer <= 1e-8);
    }
  }
}
