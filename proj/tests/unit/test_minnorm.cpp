#include <doctest.h>

#include <sipstab/charset.hpp>
#include <sipstab/error.hpp>
#include <sipstab/minnorm.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace sipstab;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }
Vector v2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

Matrix cols(std::initializer_list<Vector> vs) {
  Matrix m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  Eigen::Index j = 0;
  for (const auto& v : vs) m.col(j++) = v;
  return m;
}

CharacteristicCloud example1_cloud(int N) {
  std::vector<Constraint> cs;
  cs.push_back({"t0", ConvexFunction::affine(v2(1, 1), 0.0)});
  for (int t = 1; t <= N; ++t) {
    cs.push_back({"t" + std::to_string(t), ConvexFunction::affine(v2(t % 2 ? -t : t, 0), 1.0)});
  }
  InequalitySystem sys(2, std::move(cs));
  return build_characteristic(sys, Parameter::zero(sys), uniform_grids(sys));
}

}  // namespace

TEST_SUITE("minnorm") {
  TEST_CASE("min_norm_point examples") {
    auto r = min_norm_point(cols({v2(1, 0), v2(0, 1)}));
    CHECK(r.point(0) == doctest::Approx(0.5));
    CHECK(r.point(1) == doctest::Approx(0.5));
    CHECK(r.point.norm() == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(r.weights.lambda.sum() == doctest::Approx(1.0));

    r = min_norm_point(cols({v2(1, 1), v2(0, 0), v2(-3, 2)}));
    CHECK(r.point.norm() < 1e-12);

    r = min_norm_point(cols({v1(2), v1(3)}));
    CHECK(r.point(0) == doctest::Approx(2.0));
    CHECK(r.weights.support == std::vector<std::size_t>{0});

    CHECK_THROWS_AS(min_norm_point(Matrix(2, 0)), ValidationError);
  }

  TEST_CASE("min_norm_point against subset enumeration") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
      const int k = 1 + trial % 4;
      const int m = 1 + trial % 8;
      const Matrix P = oracle::random_cloud(rng, k, m);
      const auto r = min_norm_point(P);
      CHECK(r.point.norm() == doctest::Approx(oracle::brute_force_min_norm(P)).epsilon(1e-8));
      CHECK((P * r.weights.lambda - r.point).norm() < 1e-9);
      CHECK(wolfe_gap(P, r.point) >= -1e-9 * (1 + r.point.squaredNorm()));
    }
  }

  TEST_CASE("cone_distance examples") {
    const Matrix g1 = cols({v2(1, 2)});
    CHECK(cone_distance(g1, v2(2, 4)).distance < 1e-12);
    CHECK(cone_distance(g1, v2(2, 4)).weights.mu(0) == doctest::Approx(2.0));
    CHECK(cone_distance(cols({v2(1, 0)}), v2(0, 1)).distance == doctest::Approx(1.0));
    CHECK(cone_distance(cols({v2(1, 0), v2(0, 1)}), v2(-1, -1)).distance == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("cone_distance against support enumeration") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 80; ++trial) {
      const int k = 2 + trial % 3;
      const int m = 1 + trial % 6;
      Matrix G(k, m);
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i) G(i, j) = g(rng);
      }
      Vector target(k);
      for (int i = 0; i < k; ++i) target(i) = g(rng);
      const auto cd = cone_distance(G, target);
      CHECK(cd.distance == doctest::Approx(oracle::brute_force_cone_distance(G, target)).epsilon(1e-8));
      CHECK(cd.weights.mu.minCoeff() >= 0.0);
      CHECK((target - G * cd.weights.mu - cd.residual).norm() < 1e-9);
      // Zero distance iff the weights reproduce the target.
      const Vector inside = G * cd.weights.mu;
      const auto again = cone_distance(G, inside);
      CHECK(again.distance < 1e-8);
      CHECK((G * again.weights.mu - inside).norm() < 1e-8);
    }
  }

  TEST_CASE("constrained_min_norm on Example 1") {
    const auto cloud = example1_cloud(10);
    const auto sol = constrained_min_norm(cloud, v2(0, 0));
    REQUIRE(sol);
    CHECK(sol->u(0) == doctest::Approx(1.0));
    CHECK(sol->u(1) == doctest::Approx(1.0));
    CHECK(sol->alpha == doctest::Approx(0.0));
    const Matrix G = cloud.generators();
    const Vector z = G * sol->weights.lambda;
    CHECK((z.head(2) - sol->u).norm() < 1e-9);
    CHECK(std::abs(z(2) - sol->alpha) < 1e-9);
  }

  TEST_CASE("constrained_min_norm with the closure family") {
    auto cloud = example1_cloud(10);
    std::vector<Vector> closure;
    for (int a = -2; a <= 2; ++a) {
      Vector c(3);
      c << a, 1, 0;
      closure.push_back(c);
    }
    cloud.closure_points = closure_points_from(closure, 2);
    const auto sol = constrained_min_norm(cloud, v2(0, 0));
    REQUIRE(sol);
    CHECK(sol->u.norm() == doctest::Approx(1.0));
    CHECK(std::abs(sol->u(0)) < 1e-9);
  }

  TEST_CASE("constrained_min_norm with an empty slice") {
    std::vector<Constraint> cs;
    for (int t = 1; t <= 20; ++t) {
      cs.push_back({"t" + std::to_string(t), ConvexFunction::affine(v1(t), 1.0 / t)});
    }
    InequalitySystem sys(1, std::move(cs));
    const auto cloud = build_characteristic(sys, Parameter::zero(sys), uniform_grids(sys));
    CHECK_FALSE(constrained_min_norm(cloud, v1(0.0)).has_value());
  }

  TEST_CASE("epigraph slice contains the graph slice") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix P = oracle::random_cloud(rng, 3, 6);
      CharacteristicCloud cloud;
      cloud.dimension = 2;
      for (int j = 0; j < 6; ++j) cloud.points.push_back({P.col(j).head(2), P(2, j), 0});
      const Vector xbar = oracle::uniform_in_box(rng, 2, 0.5);
      const auto g = constrained_min_norm(cloud, xbar, SliceSide::kGraph);
      const auto e = constrained_min_norm(cloud, xbar, SliceSide::kEpigraph);
      if (g) {
        REQUIRE(e);
        CHECK(e->u.norm() <= g->u.norm() + 1e-9);
        CHECK(std::abs(g->alpha - g->u.dot(xbar)) < 1e-9);
      }
      if (e) CHECK(e->alpha <= e->u.dot(xbar) + 1e-9);
    }
  }

  TEST_CASE("fractional_sup examples") {
    // Single halfspace <a,x> <= b + p.
    CharacteristicCloud half;
    half.dimension = 2;
    half.points.push_back({v2(3, 4), 2.0 + 0.5, 0});
    const Vector x = v2(1, 1);
    CHECK(fractional_sup(half, x).value == doctest::Approx(oracle::halfspace_distance(v2(3, 4), 2.5, x)));
    CHECK(fractional_sup(half, v2(0, 0)).value == 0.0);

    // x^2 - 1 <= 0 at x = 2.
    InequalitySystem par(1, {{"f", ConvexFunction::quadratic(Matrix::Constant(1, 1, 2.0), v1(0), -1.0)}});
    const auto cloud = build_characteristic(par, Parameter::zero(par), uniform_grids(par));
    CHECK(fractional_sup(cloud, v1(2)).value == doctest::Approx(1.0));
    CHECK(fractional_sup(cloud, v1(0.5)).value == 0.0);
  }

  TEST_CASE("hull sup dominates the vertex sup") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix P = oracle::random_cloud(rng, 3, 5);
      CharacteristicCloud cloud;
      cloud.dimension = 2;
      for (int j = 0; j < 5; ++j) cloud.points.push_back({P.col(j).head(2), P(2, j), 0});
      const Vector x = oracle::uniform_in_box(rng, 2, 2.0);
      double vertex = 0.0;
      for (const auto& pt : cloud.points) {
        vertex = std::max(vertex, std::max(0.0, pt.u.dot(x) - pt.alpha) / pt.u.norm());
      }
      const auto fs = fractional_sup(cloud, x);
      CHECK(fs.value >= vertex - 1e-9);
      if (fs.finite && fs.value > 0) {
        CHECK((fs.u.dot(x) - fs.alpha) / fs.u.norm() == doctest::Approx(fs.value).epsilon(1e-7));
      }
    }
  }
}
