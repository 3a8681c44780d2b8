#include <doctest.h>

#include <sipstab/builtins.hpp>
#include <sipstab/error.hpp>
#include <sipstab/random_system.hpp>
#include <sipstab/stability.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace sipstab;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }
Vector v2(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Instance builtin(const std::string& name, BuiltinOptions o = {}) { return make_builtin(name, o).instance(); }

Instance single(int n, ConvexFunction f) { return Instance(InequalitySystem(n, {{"f", std::move(f)}})); }

Instance disk() {
  return single(2, ConvexFunction::quadratic(2 * Matrix::Identity(2, 2), v2(0, 0), -1.0));
}

}  // namespace

TEST_SUITE("stability") {
  TEST_CASE("check_ssc") {
    auto half = single(1, ConvexFunction::affine(v1(1), 0.0));
    auto c = check_ssc(half);
    CHECK(c.satisfied);
    REQUIRE(c.witness);
    CHECK(half.system.max_value(*c.witness) < 0.0);
    CHECK(c.slack > 0.0);
    CHECK(c.routes_agree);

    auto raw = builtin("parabola_raw");
    c = check_ssc(raw);
    CHECK_FALSE(c.satisfied);
    CHECK_FALSE(c.witness.has_value());
    CHECK(c.routes_agree);

    auto ex2 = builtin("example2_unbounded", {.M = 30});
    c = check_ssc(ex2);
    CHECK(c.satisfied);
    CHECK((*c.witness)(0) < 0.0);

    // Shifted to a parameter where the parabola set collapses to a point.
    auto par = builtin("parabola");
    CHECK(check_ssc(par).satisfied);
    CHECK_FALSE(check_ssc(par, {v1(-1.0)}).satisfied);
  }

  TEST_CASE("SSC routes agree on every builtin and random systems") {
    for (const auto& name : builtin_names()) {
      CHECK_MESSAGE(check_ssc(builtin(name)).routes_agree, name);
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto rs = random_ssc_system(seed);
      const auto c = check_ssc(Instance(rs.system));
      CHECK(c.satisfied);
      CHECK(c.routes_agree);
    }
  }

  TEST_CASE("distance examples through both routes") {
    auto d = disk();
    const auto p0 = Parameter::zero(d.system);
    CHECK(distance_dual(d, p0, v2(2, 0)).value == doctest::Approx(1.0));
    CHECK(distance_primal(d.system, p0, v2(2, 0)).value == doctest::Approx(1.0));
    CHECK(distance_dual(d, p0, v2(0.3, 0.2)).value == 0.0);
    CHECK(distance_primal(d.system, p0, v2(0.3, 0.2)).value == 0.0);

    auto h = builtin("halfspace");
    const auto ph = Parameter::zero(h.system);
    CHECK(distance_dual(h, ph, v2(1, 1)).value == doctest::Approx(std::sqrt(2.0)));
    CHECK(distance_primal(h.system, ph, v2(1, 1)).value == doctest::Approx(std::sqrt(2.0)));
    const auto proj = distance_primal(h.system, ph, v2(1, 1)).projection;
    CHECK(proj.norm() < 1e-12);
  }

  TEST_CASE("parabola distances near the collapse parameter") {
    auto par = builtin("parabola");
    for (double delta : {0.5, 0.1, 0.01}) {
      const Parameter p{v1(-1.0 + delta)};
      for (double x : {-2.0, 0.0, 0.05, 1.5}) {
        const double exact = oracle::parabola_distance(x, p.values(0));
        const auto primal = distance_primal(par.system, p, v1(x));
        CHECK(primal.value == doctest::Approx(exact).epsilon(1e-9));
        const auto dual = distance_dual(par, p, v1(x));
        CHECK(dual.value <= primal.value + 1e-9);
        CHECK(std::abs(dual.value - primal.value) <= 1e-5 + dual.gap);
      }
    }
  }

  TEST_CASE("distance errors") {
    InequalitySystem empty(1, {{"a", ConvexFunction::affine(v1(1), -1)}, {"b", ConvexFunction::affine(v1(-1), -1)}});
    CHECK_THROWS_AS(distance_primal(empty, Parameter::zero(empty), v1(0)), InfeasibleError);

    InequalitySystem curved(1, {{"q", ConvexFunction::quadratic(Matrix::Constant(1, 1, 2.0), v1(0), -1.0)},
                                {"a", ConvexFunction::affine(v1(-1), -3)}});
    CHECK_THROWS_AS(distance_primal(curved, Parameter::zero(curved), v1(0)), InfeasibleError);

    auto raw = builtin("parabola_raw");
    CHECK_THROWS_AS(distance_dual(raw, Parameter::zero(raw.system), v1(1)), PrerequisiteError);
    CHECK_THROWS_AS(distance_primal(raw.system, Parameter::zero(raw.system), v2(1, 1)), DimensionError);
  }

  TEST_CASE("lip_bound on Example 1") {
    for (int N : {3, 10}) {
      auto inst = builtin("example1_countable", {.N = N});
      const auto cert = lip_bound(inst, v2(0, 0));
      CHECK(cert.mode == ModulusMode::kComputed);
      CHECK(cert.lip_value == doctest::Approx(kInvSqrt2).epsilon(1e-12));
      CHECK(cert.attained);
      REQUIRE(cert.argmin);
      CHECK((*cert.argmin - v2(1, 1)).norm() < 1e-9);
      REQUIRE(cert.epsilon_diagnostics.size() == default_epsilon_schedule().size());
      for (const auto& d : cert.epsilon_diagnostics) {
        if (d.epsilon < 1.0) {
          CHECK(d.active_indices == 1);
          CHECK(d.value == doctest::Approx(kInvSqrt2));
        } else {
          CHECK(d.active_indices == static_cast<std::size_t>(N + 1));
        }
      }
    }
    auto closed = builtin("example1_countable", {.N = 10, .with_closure = true});
    const auto cert = lip_bound(closed, v2(0, 0));
    CHECK(cert.lip_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(cert.attained);
  }

  TEST_CASE("lip_bound modes and errors") {
    auto ex2 = builtin("example2_unbounded", {.M = 40});
    const auto z = lip_bound(ex2, v1(0));
    CHECK(z.mode == ModulusMode::kSlaterPointZero);
    CHECK(z.lip_value == 0.0);
    CHECK(std::string(to_string(z.mode)) == "slater-point-zero");

    auto par = builtin("parabola");
    const auto c = lip_bound(par, v1(1));
    CHECK(c.lip_value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((*c.argmin)(0) == doctest::Approx(2.0));

    CHECK_THROWS_AS(lip_bound(par, v1(2)), InfeasibleError);
    auto raw = builtin("parabola_raw");
    CHECK_THROWS_AS(lip_bound(raw, v1(0)), PrerequisiteError);
  }

  TEST_CASE("duplicating a constraint leaves lip_bound unchanged") {
    for (int N : {3, 6}) {
      auto s = make_builtin("example1_countable", {.N = N});
      auto cs = s.system.constraints();
      for (std::size_t t = 0; t < s.system.size(); ++t) {
        auto dup = cs;
        dup.push_back({"dup", cs[t].function});
        Instance inst(InequalitySystem(2, dup));
        CHECK(lip_bound(inst, v2(0, 0)).lip_value == doctest::Approx(kInvSqrt2).epsilon(1e-9));
      }
    }
    InequalitySystem twice(1, {{"f", ConvexFunction::quadratic(Matrix::Constant(1, 1, 2.0), v1(0), -1.0)},
                               {"g", ConvexFunction::quadratic(Matrix::Constant(1, 1, 2.0), v1(0), -1.0)}});
    CHECK(lip_bound(Instance(twice), v1(1)).lip_value == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("coderivative norm equals the modulus") {
    for (const auto& name : builtin_names()) {
      if (name == "parabola_raw") continue;
      auto s = make_builtin(name);
      auto inst = s.instance();
      const Vector xbar = s.probes.front().point;
      CHECK_MESSAGE(coderivative_norm(inst, xbar).value ==
                        doctest::Approx(lip_bound(inst, xbar).lip_value).epsilon(1e-9),
                    name);
    }
    auto ex2 = builtin("example2_unbounded");
    CHECK(coderivative_norm(ex2, v1(0)).value == 0.0);
  }

  TEST_CASE("coderivative_member") {
    auto h = builtin("halfspace");
    const Vector xbar = v2(0, 0);
    auto r = coderivative_member(h, xbar, v1(0), v2(0, 0));
    CHECK(r.member);

    // (p*, -x*, -<x*,xbar>) = 2 (-1, a, 0) with a = (1, 1).
    r = coderivative_member(h, xbar, v1(-2.0), v2(-2, -2));
    CHECK(r.member);
    CHECK(r.residual < 1e-9);
    CHECK(r.weights.mu.sum() == doctest::Approx(2.0));

    r = coderivative_member(h, xbar, v1(-2.0), v2(2, 2));
    CHECK_FALSE(r.member);
    CHECK(r.residual > 0.1);

    const Matrix g = graph_normal_generators(h, xbar);
    CHECK(g.rows() == 1 + 2 + 1);
    CHECK(g.cols() == 1);
  }

  TEST_CASE("quotient_sample conventions") {
    auto h = builtin("halfspace");
    const auto s = quotient_sample(h.system, {v1(0.1)}, v2(-0.2, 0.1));
    CHECK(s.numerator == 0.0);
    CHECK(s.denominator == 0.0);
    CHECK(s.ratio == 0.0);
    const auto t = quotient_sample(h.system, {v1(0.0)}, v2(0.5, 0.5));
    CHECK(t.denominator == doctest::Approx(1.0));
    CHECK(t.ratio == doctest::Approx(kInvSqrt2));
  }

  TEST_CASE("lip_sample on Example 1") {
    auto inst = builtin("example1_countable", {.N = 3});
    SampleOptions opt;
    opt.radii = {0.1, 0.01};
    opt.samples_per_radius = 500;
    const auto rows = lip_sample(inst, v2(0, 0), opt);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
      CHECK(row.max_ratio >= 0.60);
      CHECK(row.max_ratio <= kInvSqrt2 + 1e-6);
      CHECK(row.samples == 500);
    }
  }

  TEST_CASE("lip_sample at a strong Slater point vanishes with the radius") {
    const int M = 10;
    auto inst = builtin("example2_unbounded", {.M = M});
    SampleOptions opt;
    opt.radii = {0.4 / M, 0.1 / M, 0.5 / (M * (M + 1.0))};
    opt.samples_per_radius = 500;
    const auto rows = lip_sample(inst, v1(0), opt);
    for (const auto& row : rows) CHECK(row.max_ratio <= 2.0 / M);
    CHECK(rows.back().max_ratio == 0.0);
    CHECK(rows.back().violated == 0);
  }

  TEST_CASE("lip_sample does not depend on the thread count") {
    auto inst = builtin("unit_disk");
    SampleOptions opt;
    opt.radii = {0.05, 0.005};
    opt.samples_per_radius = 300;
    opt.seed = 99;
    const auto one = lip_sample(inst, v2(1, 0), opt);
    opt.threads = 4;
    const auto four = lip_sample(inst, v2(1, 0), opt);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(one[i].max_ratio == four[i].max_ratio);
      CHECK(one[i].violated == four[i].violated);
    }
    opt.seed = 100;
    CHECK(lip_sample(inst, v2(1, 0), opt)[0].max_ratio != one[0].max_ratio);
  }
}
