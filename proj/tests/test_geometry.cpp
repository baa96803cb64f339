#include <doctest.h>

#include <cmath>

#include "genequo/error.hpp"
#include "genequo/geometry.hpp"
#include "support/generators.hpp"

using namespace genequo;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector v3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("orthant projection clamps") {
    const Cone c = Cone::orthant(2);
    CHECK(project_to_cone(v2(-3, 4), c).isApprox(v2(0, 4)));
    CHECK(project_to_cone(v2(2, 1), c).isApprox(v2(2, 1)));
    CHECK(dist_to_cone(v2(-3, 4), c) == doctest::Approx(3.0));
    CHECK(dist_to_cone(v2(-1, -1), c) == doctest::Approx(std::sqrt(2.0)));
    CHECK(dist_to_cone(2.0 * v2(-3, 4), c) == doctest::Approx(6.0));
  }

  TEST_CASE("half-lines") {
    CHECK(dist_to_cone(Vector::Constant(1, 3.0), Cone::nonpos_half_line()) == doctest::Approx(3.0));
    CHECK(dist_to_cone(Vector::Constant(1, -3.0), Cone::nonpos_half_line()) == 0.0);
    CHECK(dist_to_cone(Vector::Constant(1, -2.5), Cone::nonneg_half_line()) == doctest::Approx(2.5));
  }

  TEST_CASE("polyhedral projection matches the QP oracle") {
    // Reference values from tools/oracles/derive.py (SLSQP).
    Matrix a1(1, 2);
    a1 << 1, 1;
    CHECK((project_to_cone(v2(1, 1), Cone::polyhedral(a1)) - v2(0, 0)).norm() < 1e-8);

    Matrix a2(2, 2);
    a2 << 1, -2, -1, 0;
    const Cone c2 = Cone::polyhedral(a2);
    CHECK((project_to_cone(v2(2, 0.5), c2) - v2(1.8, 0.9)).norm() < 1e-8);
    CHECK((project_to_cone(v2(-1, 3), c2) - v2(0, 3)).norm() < 1e-8);
    CHECK((project_to_cone(v2(0.5, -2), c2) - v2(0, 0)).norm() < 1e-8);

    Matrix a3(3, 3);
    a3 << 1, 1, 1, -1, 0, 0, 0, -1, 0;
    CHECK(project_to_cone(v3(1, -0.5, 2), Cone::polyhedral(a3)).norm() < 1e-8);
  }

  TEST_CASE("projection rejects dimension mismatch") {
    CHECK_THROWS_AS(project_to_cone(v3(1, 2, 3), Cone::orthant(2)), DimensionMismatch);
  }

  TEST_CASE("pointedness") {
    CHECK(Cone::orthant(3).is_pointed());
    Matrix half(1, 2);
    half << 1, 1;
    CHECK_FALSE(Cone::polyhedral(half).is_pointed());
    CHECK(Cone::polyhedral(-Matrix::Identity(2, 2)).is_pointed());
  }

  TEST_CASE("orthant depth") {
    CHECK(orthant_depth(v2(3, 5), v2(1, 1)) == 2.0);
    CHECK(orthant_depth(v2(1, 1), v2(1, 1)) == 0.0);
    CHECK(orthant_depth(v2(0, 5), v2(1, 1)) == -1.0);
    CHECK(cone_depth(Vector::Constant(1, -3.0), Vector::Constant(1, -1.0), Cone::nonpos_half_line()) == 2.0);
    Matrix a(1, 2);
    a << 1, 1;
    CHECK_THROWS_AS(cone_depth(v2(0, 0), v2(0, 0), Cone::polyhedral(a)), PreconditionError);
  }

  TEST_CASE("normal form") {
    const SetRep s = SetRep::points({v2(-3, 4), v2(1, 1)});
    const SetRep e = SetRep::enlargement(SetRep::enlargement(s, 1.0), 0.5);
    CHECK(e.layers().radius == doctest::Approx(1.5));
    CHECK(e.depth() <= 3);
    const SetRep b = SetRep::enlargement(SetRep::ball(v2(0, 0), 1.0), 2.0);
    CHECK(std::holds_alternative<SetRep::Ball>(b.node()));
    const Cone c = Cone::orthant(2);
    const SetRep pc = SetRep::plus_cone(SetRep::plus_cone(s, c), c);
    CHECK(pc.depth() == SetRep::plus_cone(s, c).depth());
    CHECK_THROWS_AS(SetRep::plus_cone(SetRep::plus_cone(s, c), Cone::polyhedral(Matrix::Identity(2, 2))),
                    PreconditionError);
    // An enlargement of S + C is held as B(S, r) + C.
    const SetRep ep = SetRep::enlargement(SetRep::plus_cone(s, c), 1.0);
    CHECK(std::holds_alternative<SetRep::PlusCone>(ep.node()));
  }

  TEST_CASE("excess worked values") {
    const Cone c = Cone::orthant(2);
    const SetRep cloud = SetRep::points({v2(-3, 4), v2(1, 1)});
    const ExcessValue e1 = excess_to_cone(cloud, c);
    CHECK(e1.value == doctest::Approx(3.0));
    CHECK(e1.exact());
    CHECK(e1.attained_at->isApprox(v2(-3, 4)));

    CHECK(excess_to_cone(SetRep::ball(v2(-3, 4), 2.0), c).value == doctest::Approx(5.0));
    CHECK(excess_to_cone(SetRep::enlargement(cloud, 1.0), c).value == doctest::Approx(4.0));
    CHECK(excess_to_cone(SetRep::plus_cone(SetRep::point(v2(-3, 4)), c), c).value == doctest::Approx(3.0));
    CHECK(excess_to_cone(SetRep::point(v2(1, 2)), c).value == 0.0);

    const SetRep ball_plus = SetRep::plus_cone(SetRep::ball(v2(-3, 4), 2.0), c);
    const ExcessValue e2 = excess_to_cone(ball_plus, c);
    CHECK(e2.value == doctest::Approx(5.0));
    CHECK(e2.exact());
    const ExcessValue brute = sampled_excess(ball_plus, SetRep::cone(c), sphere_directions(2, 4096));
    CHECK(brute.value <= e2.value + 1e-12);
    CHECK(brute.value == doctest::Approx(5.0).epsilon(1e-3));
  }

  TEST_CASE("excess of finite clouds matches brute force") {
    // exc(S1, S2) = sqrt(5), from tools/oracles/derive.py.
    const SetRep s1 = SetRep::points({v2(0, 0), v2(3, 4), v2(1, -1)});
    const SetRep s2 = SetRep::points({v2(0, 1), v2(2, 2)});
    CHECK(excess(s1, s2).value == doctest::Approx(std::sqrt(5.0)));
  }

  TEST_CASE("dense sampling agrees with the ball closed form in R^3") {
    // Dense numpy sampling gives 2.98607 (lower bound) for the closed form 2.98606797749979.
    const Vector y = v3(-1, 0.5, -2);
    const ExcessValue e = excess_to_cone(SetRep::ball(y, 0.75), Cone::orthant(3));
    CHECK(e.value == doctest::Approx(2.98606797749979).epsilon(1e-12));
    CHECK(e.value >= 2.9860658687141934);
  }

  TEST_CASE("empty-set conventions") {
    const Cone c = Cone::orthant(2);
    const ExcessValue vac = excess(SetRep::empty(2), SetRep::cone(c));
    CHECK(vac.kind == ExcessKind::VacuousSource);
    CHECK(vac.value == -std::numeric_limits<double>::infinity());
    const ExcessValue inf = excess(SetRep::point(v2(0, 0)), SetRep::empty(2));
    CHECK(inf.kind == ExcessKind::EmptyTarget);
    CHECK(inf.value == std::numeric_limits<double>::infinity());
    CHECK(dist_to_set(v2(0, 0), SetRep::empty(2)) == std::numeric_limits<double>::infinity());
  }

  TEST_CASE("ball centred inside the cone is a sampled bound") {
    const ExcessValue e = excess_to_cone(SetRep::ball(v2(2, 3), 1.0), Cone::orthant(2));
    CHECK_FALSE(e.exact());
    CHECK(e.value >= 0.0);
    CHECK(e.value <= 1.0 + 1e-12);
  }

  TEST_CASE("property: distance is positively homogeneous") {
    Rng rng(7);
    Matrix a(2, 3);
    a << 1, -1, 0.5, -0.3, 2, 1;
    const std::vector<Cone> cones{Cone::orthant(3), Cone::polyhedral(a)};
    for (int i = 0; i < 200; ++i) {
      const Cone& c = cones[static_cast<std::size_t>(i % 2)];
      const Vector y = gen::uniform_vector(rng, 3, -5, 5);
      const double t = gen::log_uniform(rng, 1e-2, 1e2);
      CHECK(dist_to_cone(t * y, c) == doctest::Approx(t * dist_to_cone(y, c)).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("property: projection is a nearest point of the cone") {
    Rng rng(11);
    Matrix a(3, 3);
    a << 1, 1, 0, -1, 0.5, 0, 0, -1, 1;
    const Cone c = Cone::polyhedral(a);
    const auto dirs = sphere_directions(3, 64);
    for (int i = 0; i < 100; ++i) {
      const Vector y = gen::uniform_vector(rng, 3, -4, 4);
      const Vector p = project_to_cone(y, c);
      CHECK(c.contains(p, 1e-8));
      // Variational inequality <y - p, z - p> <= 0 for z in C, probed at z = P(p + d).
      for (const auto& d : dirs) {
        const Vector z = project_to_cone(p + d, c);
        CHECK((y - p).dot(z - p) <= 1e-7);
      }
    }
  }

  TEST_CASE("property: ball identity and attaining direction") {
    Rng rng(3);
    Matrix a(2, 2);
    a << 1, 0.4, -0.2, 1;
    for (int i = 0; i < 300; ++i) {
      const int m = gen::pick(rng, {1, 2, 3, 5});
      const bool polyhedral = m == 2 && i % 2 == 0;
      const Cone c = polyhedral ? Cone::polyhedral(a) : Cone::orthant(m);
      Vector y = gen::outside_orthant(rng, m, 4.0);
      if (polyhedral && c.contains(y, 1e-6)) continue;
      const double r = rng.uniform(1e-3, 10.0);
      const Vector p = project_to_cone(y, c);
      const double d = (y - p).norm();
      const ExcessValue e = excess_to_cone(SetRep::ball(y, r), c);
      CHECK(e.exact());
      CHECK(std::abs(e.value - (d + r)) <= 1e-12 * (1.0 + d + r));
      const Vector v = r * (y - p) / d;
      CHECK(std::abs(dist_to_cone(y + v, c) - (d + r)) <= 1e-9 * (1.0 + d + r));
    }
  }

  TEST_CASE("property: enlargement adds the radius") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const int m = gen::pick(rng, {1, 2, 3});
      auto pts = gen::cloud(rng, m, 1 + static_cast<int>(rng.index(6)), 3.0);
      pts.push_back(gen::outside_orthant(rng, m, 3.0));
      const SetRep s = SetRep::points(pts);
      const double r = rng.uniform(0.01, 5.0);
      const double base = excess_to_cone(s, Cone::orthant(m)).value;
      REQUIRE(base > 0.0);
      CHECK(std::abs(excess_to_cone(SetRep::enlargement(s, r), Cone::orthant(m)).value - (base + r)) <=
            1e-12 * (1.0 + base + r));
    }
  }

  TEST_CASE("property: cone layer over the same cone is erased") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
      const Cone c = Cone::orthant(2);
      const SetRep s = SetRep::points(gen::cloud(rng, 2, 4, 3.0));
      CHECK(excess_to_cone(SetRep::plus_cone(s, c), c).value == doctest::Approx(excess_to_cone(s, c).value));
    }
  }

  TEST_CASE("property: dilation inequality") {
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
      const int m = gen::pick(rng, {1, 2, 3, 5});
      const Cone c = Cone::orthant(m);
      const Vector y = gen::outside_orthant(rng, m, 5.0);
      const Vector cbar = gen::in_orthant(rng, m, 5.0);
      const double alpha = gen::log_uniform(rng, 1e-3, 1e2);
      CHECK(dist_to_cone(y + alpha * (y - cbar), c) >= (1.0 + alpha) * dist_to_cone(y, c) * (1.0 - 1e-12));
    }
  }

  TEST_CASE("property: enlarging by ar never fits inside B(S + C, r)") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
      const int m = gen::pick(rng, {1, 2, 3});
      const Cone c = Cone::orthant(m);
      const SetRep s = SetRep::points(gen::cloud(rng, m, 3, 2.0));
      const double r = rng.uniform(0.05, 2.0);
      const double a = std::vector<double>{1.5, 2.0, 4.0}[rng.index(3)];
      const ExcessValue e = excess(SetRep::enlargement(s, a * r), SetRep::plus_cone(s, c));
      CHECK(e.value > r);
      CHECK(e.value >= a * r * (1.0 - 1e-9));
    }
  }

  TEST_CASE("property: sampled excess never exceeds the closed form") {
    Rng rng(19);
    const auto dirs = sphere_directions(2, 512);
    for (int i = 0; i < 100; ++i) {
      const SetRep s = SetRep::enlargement(SetRep::points(gen::cloud(rng, 2, 3, 3.0)), rng.uniform(0.0, 2.0));
      const ExcessValue closed = excess_to_cone(s, Cone::orthant(2));
      if (!closed.exact()) continue;
      CHECK(sampled_excess(s, SetRep::cone(Cone::orthant(2)), dirs).value <= closed.value + 1e-12);
    }
  }
}
