#include <doctest.h>

#include <cmath>

#include "genequo/error.hpp"
#include "genequo/vecopt.hpp"
#include "support/generators.hpp"

using namespace genequo;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

VectorProblem identity_problem(std::vector<Vector> r) {
  return {[](const Vector& x) { return x; }, std::move(r), Cone::orthant(2)};
}

}  // namespace

TEST_SUITE("vecopt") {
  TEST_CASE("residuals") {
    const VectorProblem p = identity_problem({v2(0, 0), v2(1, 2), v2(2, 1)});
    CHECK(ideal_residual(p, v2(0, 0)) == 0.0);
    CHECK(ideal_residual(p, v2(1, 2)) == doctest::Approx(std::sqrt(5.0)));
    CHECK(ideal_residual(p, v2(2, 1)) == doctest::Approx(std::sqrt(5.0)));
    CHECK(phi(ideal_map(p), p.cone, v2(1, 2)).value == doctest::Approx(std::sqrt(5.0)));

    const IdealReport rep = ideal_efficient_set(p);
    REQUIRE(rep.ideal_indices.size() == 1);
    CHECK(rep.ideal_indices[0] == 0);
    CHECK(rep.pointed);
    CHECK(rep.unique_value);
    CHECK(pareto_cross_check(p, v2(0, 0)));
    CHECK_THROWS_AS(pareto_cross_check(p, v2(1, 2)), PreconditionError);
  }

  TEST_CASE("incomparable images have no ideal point") {
    const VectorProblem p = identity_problem({v2(1, 2), v2(2, 1)});
    CHECK(ideal_efficient_set(p).empty());
    const IdealReport with_rate = ideal_efficient_set(p, 1.5);
    CHECK(with_rate.empty());
    CHECK(with_rate.hypothesis_failed);
  }

  TEST_CASE("non-pointed cone") {
    // {y : y1 >= 0}: y2 is free, so ideal points may carry different images.
    const VectorProblem p{[](const Vector& x) { return x; }, {v2(0, 0), v2(0, 5), v2(1, 1)},
                          Cone::polyhedral(Matrix::Constant(1, 2, 0.0) - Matrix(v2(1, 0).transpose()))};
    const IdealReport rep = ideal_efficient_set(p);
    CHECK_FALSE(rep.pointed);
    CHECK(rep.ideal_indices.size() == 2);
  }

  TEST_CASE("planted instance") {
    const VectorProblem p{[](const Vector& x) { return Vector(-3.0 * x); },
                          {v2(2, 2), v2(0, 1), v2(1.5, -1), v2(-0.5, 0.25), v2(1, 1.75), v2(2, 0.5), v2(0.3, 2)},
                          Cone::orthant(2)};
    const IdealReport rep = ideal_efficient_set(p, std::sqrt(2.0));
    REQUIRE(rep.ideal_indices.size() == 1);
    CHECK(rep.ideal_indices[0] == 0);
    CHECK(rep.checks.size() == p.feasible.size());
    for (const auto& c : rep.checks) CHECK(c.satisfied);
    CHECK(pareto_cross_check(p, v2(2, 2)));
    const DiscreteIncreaseCheck d = discrete_increase_check(p, std::sqrt(2.0), 50);
    CHECK(d.pairs == 50);
    // Below the minimum spacing of R the only candidate is u = x, and a single
    // point ball never fits: the inclusion is refuted there for every a > 1.
    CHECK(d.refuted > 0);
    CHECK(d.certified + d.refuted + d.inconclusive == 50);
  }

  TEST_CASE("property: planted maxima are the unique ideal points") {
    Rng rng(71);
    for (int i = 0; i < 100; ++i) {
      const double c = rng.uniform(1.0, 3.0);
      auto pts = gen::cloud(rng, 2, 2 + static_cast<int>(rng.index(10)), 2.0);
      const Vector planted = v2(2.0, 2.0) + gen::in_orthant(rng, 2, 0.5);
      const std::size_t at = rng.index(pts.size() + 1);
      pts.insert(pts.begin() + static_cast<long>(at), planted);
      const VectorProblem p{[c](const Vector& x) { return Vector(-c * x); }, pts, Cone::orthant(2)};
      const IdealReport rep = ideal_efficient_set(p, 1.0 + rng.uniform(0.1, c));
      REQUIRE(rep.ideal_indices.size() == 1);
      CHECK(rep.ideal_indices[0] == at);
      CHECK(rep.unique_value);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK((rep.residuals[k] == 0.0) == (k == at));
        CHECK(rep.residuals[k] >= c * (pts[k] - planted).norm() * (1 - 1e-12));
      }
      for (const auto& chk : rep.checks) CHECK(chk.satisfied);
      CHECK(pareto_cross_check(p, planted));
    }
  }
}
