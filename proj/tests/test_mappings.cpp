#include <doctest.h>

#include <cmath>

#include "genequo/error.hpp"
#include "genequo/mappings.hpp"
#include "support/generators.hpp"

using namespace genequo;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector s1(double a) { return Vector::Constant(1, a); }

SetValuedMap abs_map() {
  return single_valued([](const Vector& x) { return Vector::Constant(1, std::abs(x[0])); }, 1, 1, "|x|");
}

}  // namespace

TEST_SUITE("mappings") {
  TEST_CASE("evaluation") {
    const Cone c = Cone::orthant(2);
    const SetValuedMap aff = affine_plus_cone(3.0 * Matrix::Identity(2, 2), c);
    const SetRep fx = aff.eval(v2(1, 0));
    REQUIRE(std::holds_alternative<SetRep::PlusCone>(fx.node()));
    const auto layers = fx.layers();
    CHECK(layers.cone);
    CHECK(*layers.cone == c);
    CHECK(layers.at(0).isApprox(v2(3, 0)));

    CHECK(abs_map().eval(s1(-2)).layers().at(0)[0] == 2.0);

    const SetValuedMap shift = image_shift([](const Vector& x) { return x; }, {v2(0, 0), v2(1, 2)}, 2);
    const SetRep shifted = shift.eval(v2(1, 2));
    const auto sl = shifted.layers();
    REQUIRE(sl.size() == 2);
    CHECK(sl.at(0).isApprox(v2(-1, -2)));
    CHECK(sl.at(1).isZero());
  }

  TEST_CASE("domain box") {
    const SetValuedMap m = abs_map().with_box(DomainBox::symmetric(1, 1.0));
    CHECK_NOTHROW(m.eval(s1(0.5)));
    CHECK_THROWS_AS(m.eval(s1(1.5)), OutOfDomain);
    CHECK_THROWS_AS(abs_map().eval(v2(0, 0)), DimensionMismatch);
  }

  TEST_CASE("residual worked values") {
    CHECK(phi(abs_map(), Cone::nonpos_half_line(), s1(3)).value == doctest::Approx(3.0));
    const Cone c = Cone::orthant(2);
    const Residual r = phi(affine_plus_cone(3.0 * Matrix::Identity(2, 2), c), c, v2(-1, -1));
    CHECK(r.value == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK(r.exactness == Exactness::Exact);
    CHECK(phi(linear_map(Matrix::Identity(2, 2)), c, v2(1, 2)).value == 0.0);
  }

  TEST_CASE("empty value is vacuously feasible") {
    const SetValuedMap empty(MapKind::Custom, 1, 1, [](const Vector&) { return SetRep::empty(1); });
    const Residual r = phi(empty, Cone::nonneg_half_line(), s1(0));
    CHECK(r.value == 0.0);
    CHECK(r.vacuous);
  }

  TEST_CASE("semi-infinite residual is the worst violation") {
    std::vector<Vector> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(s1(k / 10.0));
    const SetValuedMap g = semi_infinite([](const Vector& t, const Vector& x) { return t[0] * x[0] - 1.0; }, grid, 1);
    CHECK(phi(g, Cone::nonpos_half_line(), s1(3)).value == doctest::Approx(2.0));
    CHECK(phi(g, Cone::nonpos_half_line(), s1(0.5)).value == 0.0);
  }

  TEST_CASE("variational residual") {
    // grad = x - 1 on R = {0, 2}: <x - 1, z - x>.
    const SetValuedMap vi = vi_residual([](const Vector& x) { return Vector(x.array() - 1.0); }, {s1(0), s1(2)});
    CHECK(phi(vi, Cone::nonneg_half_line(), s1(1)).value == 0.0);
    CHECK(phi(vi, Cone::nonneg_half_line(), s1(0)).value == doctest::Approx(2.0));
  }

  TEST_CASE("semicontinuity probe") {
    ProbeOptions opts;
    opts.directions = 2;
    const ProbeReport smooth = semicontinuity_probe(abs_map(), Cone::nonpos_half_line(), s1(0.3), opts);
    CHECK_FALSE(smooth.lsc_violation);
    CHECK_FALSE(smooth.usc_violation);

    // F(0) = {1}, F(x) = {0} elsewhere. Against (-inf, 0] the residual drops from
    // 1 to 0 away from the origin.
    const SetValuedMap step(MapKind::Custom, 1, 1,
                            [](const Vector& x) { return SetRep::point(s1(x[0] == 0.0 ? 1.0 : 0.0)); });
    const ProbeReport r = semicontinuity_probe(step, Cone::nonpos_half_line(), s1(0), opts);
    CHECK(r.phi_center == 1.0);
    CHECK(r.lsc_violation);
    CHECK_FALSE(r.usc_violation);

    const Cone c = Cone::orthant(2);
    const ProbeReport aff =
        semicontinuity_probe(affine_plus_cone(3.0 * Matrix::Identity(2, 2), c), c, v2(-0.2, 0.4), opts);
    CHECK(aff.worst_lsc_gap <= 1e-6);
    CHECK(aff.worst_usc_gap <= 1e-6);

    opts.radii = {0.1, 0.2};
    CHECK_THROWS_AS(semicontinuity_probe(abs_map(), Cone::nonpos_half_line(), s1(0), opts), PreconditionError);
  }

  TEST_CASE("property: affine residual is the cone distance of the image and Lipschitz") {
    Rng rng(23);
    const Cone c = Cone::orthant(2);
    for (int i = 0; i < 100; ++i) {
      const Matrix lambda = gen::uniform_matrix(rng, 2, 2, -3, 3);
      const SetValuedMap f = affine_plus_cone(lambda, c);
      const Vector x1 = gen::uniform_vector(rng, 2, -5, 5);
      const Vector x2 = gen::uniform_vector(rng, 2, -5, 5);
      const double p1 = phi(f, c, x1).value;
      const double p2 = phi(f, c, x2).value;
      CHECK(p1 == doctest::Approx(dist_to_cone(lambda * x1, c)));
      CHECK(std::abs(p1 - p2) <= lambda.norm() * (x1 - x2).norm() + 1e-9);
    }
  }

  TEST_CASE("property: feasibility iff every generator lies in the cone") {
    Rng rng(29);
    const Cone c = Cone::orthant(2);
    for (int i = 0; i < 200; ++i) {
      const auto pts = gen::cloud(rng, 2, 3, 1.0);
      const Vector shift = gen::uniform_vector(rng, 2, -0.5, 1.5);
      const SetValuedMap f(MapKind::Custom, 2, 2, [pts, shift](const Vector&) {
        std::vector<Vector> moved;
        for (const auto& p : pts) moved.push_back(p.cwiseAbs() + shift);
        return SetRep::points(moved);
      });
      const SetRep fx = f.eval(v2(0, 0));
      bool all_in = true;
      const auto layers = fx.layers();
      for (std::size_t k = 0; k < layers.size(); ++k) all_in = all_in && dist_to_cone(layers.at(k), c) <= 1e-8;
      CHECK(phi(f, c, v2(0, 0)).feasible() == all_in);
    }
  }

  TEST_CASE("property: sums evaluate to pointwise Minkowski sums") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
      const auto a = gen::cloud(rng, 2, 2, 2.0);
      const auto b = gen::cloud(rng, 2, 3, 2.0);
      const SetValuedMap f(MapKind::Custom, 1, 2, [a](const Vector&) { return SetRep::points(a); });
      const SetValuedMap g(MapKind::Custom, 1, 2, [b](const Vector&) { return SetRep::points(b); });
      const SetRep fg = sum(f, g).eval(s1(0));
      const auto layers = fg.layers();
      REQUIRE(layers.size() == a.size() * b.size());
      for (const auto& p : a) {
        for (const auto& q : b) {
          bool found = false;
          for (std::size_t k = 0; k < layers.size(); ++k) found = found || (layers.at(k) - (p + q)).norm() < 1e-12;
          CHECK(found);
        }
      }
    }
  }

  TEST_CASE("property: semi-infinite residual against the nonpositive half-line") {
    Rng rng(37);
    std::vector<Vector> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(s1(k / 20.0));
    auto g = [](const Vector& t, const Vector& x) { return std::sin(3.0 * t[0]) * x[0] + x[1] * x[1] - t[0]; };
    const SetValuedMap f = semi_infinite(g, grid, 2);
    for (int i = 0; i < 100; ++i) {
      const Vector x = gen::uniform_vector(rng, 2, -2, 2);
      double expected = 0.0;
      for (const auto& t : grid) expected = std::max(expected, g(t, x));
      CHECK(phi(f, Cone::nonpos_half_line(), x).value == doctest::Approx(expected));
    }
  }
}
