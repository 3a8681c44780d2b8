#include <sipstab/builtins.hpp>
#include <sipstab/error.hpp>

#include <algorithm>
#include <cmath>

namespace sipstab {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// phi(z) = 1/2 ||z - (0, xbar) - mu * normal||^2, minimized over gph F at
// (0, xbar) whenever normal is a normal vector to gph F there.
Objective pulled_objective(const Vector& xbar, const Vector& normal, double mu, Eigen::Index m) {
  Vector center = mu * normal;
  center.tail(xbar.size()) += xbar;
  const auto size = m + xbar.size();
  return Objective::quadratic(Matrix::Identity(size, size), -center, 0.5 * center.squaredNorm());
}

Scenario example1(const BuiltinOptions& o) {
  if (o.N < 1) throw ValidationError("example1_countable needs N >= 1");
  std::vector<Constraint> cs;
  cs.push_back({"t0", ConvexFunction::affine(vec({1.0, 1.0}), 0.0)});
  for (int t = 1; t <= o.N; ++t) {
    const double sign = t % 2 == 0 ? 1.0 : -1.0;
    cs.push_back({"t" + std::to_string(t), ConvexFunction::affine(vec({sign * t, 0.0}), 1.0)});
  }
  Scenario s("example1_countable",
             InequalitySystem(2, std::move(cs), Truncation{"x1 + x2 <= p_0; (-1)^t t x1 <= 1 + p_t, t = 1, 2, ...", o.N}));
  if (o.with_closure) {
    ClosureDeclaration decl;
    decl.justification =
        "(1 - e)(1, 1, 0) + e((-1)^t t, 0, 1) with e t -> alpha - 1 tends to (alpha, 1, 0) as t grows; "
        "these limits lie in the weak*-closure of C(0) for the untruncated family only";
    for (int a = -2; a <= 2; ++a) decl.points.push_back(vec({static_cast<double>(a), 1.0, 0.0}));
    s.closure = std::move(decl);
  }
  Probe probe;
  probe.point = vec({0.0, 0.0});
  probe.distance_points = {vec({1.0, 1.0}), vec({0.5, -2.0}), vec({-0.25, 0.1})};
  probe.queries = {{vec({1.0, 1.0}), 0.0}, {vec({1.0, 1.0}), -1.0}, {vec({2.0, 2.0}), 1.0}};
  s.probes.push_back(std::move(probe));
  // Below 1/(N+1) no constraint t >= 1 can become active near xbar.
  const double r0 = std::min(0.1, 0.5 / (o.N + 1));
  s.radii = r0 > 0.01 ? std::vector<double>{r0, 0.01} : std::vector<double>{r0};
  s.samples = 1000;
  return s;
}

Scenario example2(const BuiltinOptions& o) {
  if (o.M < 1) throw ValidationError("example2_unbounded needs M >= 1");
  std::vector<Constraint> cs;
  for (int t = 1; t <= o.M; ++t) {
    cs.push_back({"t" + std::to_string(t), ConvexFunction::affine(vec({static_cast<double>(t)}), 1.0 / t)});
  }
  Scenario s("example2_unbounded",
             InequalitySystem(1, std::move(cs), Truncation{"t x <= 1/t + p_t, t in [1, infinity)", o.M}));
  Probe probe;
  probe.point = vec({0.0});
  probe.distance_points = {vec({1.0}), vec({-1.0})};
  probe.queries = {{vec({1.0}), 1.0 / (static_cast<double>(o.M) * o.M)}, {vec({1.0}), 0.0}};
  s.probes.push_back(std::move(probe));
  // Below 1/(M(M+1)) every sampled x stays in F(p).
  s.radii = {0.4 / o.M, 0.5 / (static_cast<double>(o.M) * (o.M + 1))};
  s.samples = 1000;
  return s;
}

Scenario parabola(bool raw) {
  Matrix q(1, 1);
  q << 2.0;
  std::vector<Constraint> cs;
  cs.push_back({"f", ConvexFunction::quadratic(q, vec({0.0}), raw ? 0.0 : -1.0)});
  Scenario s(raw ? "parabola_raw" : "parabola", InequalitySystem(1, std::move(cs)));
  Probe probe;
  probe.point = vec({raw ? 0.0 : 1.0});
  probe.distance_points = {vec({2.0}), vec({0.5}), vec({-3.0})};
  probe.queries = {{vec({1.0}), 1.0}, {vec({1.0}), 0.5}};
  if (!raw) {
    // Pull toward the normal (-1, 2) of gph F at (0, 1).
    s.objective = pulled_objective(probe.point, vec({-1.0, 2.0}), 0.5, 1);
  }
  s.probes.push_back(std::move(probe));
  s.radii = {0.01, 0.001, 0.0001};
  s.samples = 1000;
  return s;
}

Scenario unit_disk() {
  std::vector<Constraint> cs;
  cs.push_back({"disk", ConvexFunction::quadratic(2.0 * Matrix::Identity(2, 2), Vector::Zero(2), -1.0)});
  Scenario s("unit_disk", InequalitySystem(2, std::move(cs)));
  Probe probe;
  probe.point = vec({1.0, 0.0});
  probe.distance_points = {vec({2.0, 0.0}), vec({0.0, -3.0}), vec({0.5, 0.5})};
  probe.queries = {{vec({1.0, 0.0}), 1.0}, {vec({1.0, 1.0}), 1.0}};
  s.objective = pulled_objective(probe.point, vec({-1.0, 2.0, 0.0}), 1.0, 1);
  s.probes.push_back(std::move(probe));
  s.radii = {0.01, 0.001};
  s.samples = 1000;
  return s;
}

Scenario halfspace() {
  std::vector<Constraint> cs;
  cs.push_back({"h", ConvexFunction::affine(vec({1.0, 1.0}), 0.0)});
  Scenario s("halfspace", InequalitySystem(2, std::move(cs)));
  Probe probe;
  probe.point = vec({0.0, 0.0});
  probe.distance_points = {vec({1.0, 1.0}), vec({-1.0, 0.0})};
  probe.queries = {{vec({1.0, 1.0}), 0.0}, {vec({-1.0, -1.0}), 0.0}};
  s.objective = pulled_objective(probe.point, vec({-1.0, 1.0, 1.0}), 1.0, 1);
  s.probes.push_back(std::move(probe));
  s.radii = {0.1, 0.01};
  s.samples = 1000;
  return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"example1_countable", "example2_unbounded", "parabola", "parabola_raw", "unit_disk", "halfspace"};
}

std::string builtin_description(const std::string& name) {
  if (name == "example1_countable") return "x1 + x2 <= 0, (-1)^t t x1 <= 1 (t = 1..N) in R^2, xbar = 0";
  if (name == "example2_unbounded") return "t x <= 1/t (t = 1..M) in R, xbar = 0";
  if (name == "parabola") return "x^2 - 1 <= p in R, xbar = 1";
  if (name == "parabola_raw") return "x^2 <= p in R, xbar = 0 (fails the strong Slater condition)";
  if (name == "unit_disk") return "x1^2 + x2^2 - 1 <= p in R^2, xbar = (1, 0)";
  if (name == "halfspace") return "x1 + x2 <= p in R^2, xbar = 0";
  throw ValidationError("unknown builtin '" + name + "'");
}

Scenario make_builtin(const std::string& name, const BuiltinOptions& options) {
  if (name == "example1_countable") return example1(options);
  if (name == "example2_unbounded") return example2(options);
  if (name == "parabola") return parabola(false);
  if (name == "parabola_raw") return parabola(true);
  if (name == "unit_disk") return unit_disk();
  if (name == "halfspace") return halfspace();
  throw ValidationError("unknown builtin '" + name + "'");
}

}  // namespace sipstab
