#pragma once

#include <sipstab/instance.hpp>
#include <sipstab/minnorm.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sipstab {

// ---------------------------------------------------------------------------
// Strong Slater condition
// ---------------------------------------------------------------------------

struct SlaterCertificate {
  bool satisfied = false;
  /// Strong Slater point, present iff satisfied.
  std::optional<Vector> witness;
  /// -sup_t f_t(witness) when satisfied; otherwise -(best value found).
  double slack = 0.0;
  /// Half-width of the box where the witness was searched.
  double search_radius = 0.0;
  /// Distance from (0,0) to co(C(0) U closure points).
  double dual_check = 0.0;
  bool dual_satisfied = false;
  bool routes_agree = true;
  std::string diagnostic;
};

/// Primal route: minimize sup_t f_t over boxes of growing radius (an exact LP
/// for polyhedral systems, an ellipsoid method otherwise). Dual route: the
/// min-norm distance from the origin to the characteristic hull. `satisfied`
/// follows the primal route; a disagreement is recorded in `diagnostic`.
SlaterCertificate check_ssc(const Instance& inst);

/// Same test for the system at parameter p (sigma(p) shifted to 0).
SlaterCertificate check_ssc(const Instance& inst, const Parameter& p);

// ---------------------------------------------------------------------------
// Distance to the feasible set
// ---------------------------------------------------------------------------

struct PrimalDistance {
  double value = 0.0;
  Vector projection;
  int cycles = 0;
  bool converged = true;
};

/// min ||y - x|| subject to f_t(y) <= p_t. The affine pieces form one
/// polyhedron projected exactly (least-distance program); with quadratic
/// constraints present, Dykstra's method alternates between that polyhedron
/// and the quadratic sublevel sets. Throws InfeasibleError when F(p) is
/// detected to be empty.
PrimalDistance distance_primal(const InequalitySystem& system, const Parameter& p,
                               const Vector& x, const Tolerances& tol = {});

struct DualDistance {
  double value = 0.0;
  bool finite = true;
  /// Maximizing element (u, alpha) of the characteristic hull.
  Vector u;
  double alpha = 0.0;
  /// Projection of x onto the linearized feasible set.
  Vector projection;
  /// dist(projection; F(p)): bounds distance_primal - distance_dual.
  double gap = 0.0;
  /// max over {x, projection} of (convex residual - linearized residual).
  double residual_gap = 0.0;
};

/// sup over C(p) of [<u,x> - alpha]_+ / ||u||. Throws PrerequisiteError when
/// sigma(p) fails the strong Slater condition.
DualDistance distance_dual(const Instance& inst, const Parameter& p, const Vector& x);

// ---------------------------------------------------------------------------
// Lipschitz modulus and coderivative
// ---------------------------------------------------------------------------

enum class ModulusMode { kSlaterPointZero, kEmptyIntersectionZero, kComputed };

const char* to_string(ModulusMode mode);

struct EpsilonDiagnostic {
  double epsilon = 0.0;
  std::size_t active_indices = 0;
  /// 1 / min ||u|| over the eps-active slice, 0 when the slice is empty.
  double value = 0.0;
};

struct ModulusCertificate {
  double lip_value = 0.0;
  bool attained = false;
  ModulusMode mode = ModulusMode::kComputed;
  /// Present in mode kComputed.
  std::optional<Vector> argmin;
  double alpha = 0.0;
  SimplexWeights weights;
  std::size_t cloud_size = 0;
  std::vector<EpsilonDiagnostic> epsilon_diagnostics;
};

std::vector<double> default_epsilon_schedule();

/// lip F(0, xbar) = 1 / min{ ||u|| : (u, <u,xbar>) in cl C(0) }, with 0 at
/// strong Slater points and on an empty slice. The linearization is anchored
/// at xbar (its tangent rows are always included).
/// Throws InfeasibleError (xbar not in F(0)) or PrerequisiteError (no SSC).
ModulusCertificate lip_bound(const Instance& inst, const Vector& xbar,
                             const std::vector<double>& epsilon_schedule = default_epsilon_schedule());

struct CoderivativeNorm {
  double value = 0.0;
  std::optional<Vector> argmin;
};

/// ||D*F(0,xbar)|| through the epigraph-side slice of H(0).
CoderivativeNorm coderivative_norm(const Instance& inst, const Vector& xbar);

struct ConeMembership {
  bool member = false;
  double residual = 0.0;
  ConeWeights weights;
};

/// Columns (-e_t, u, f_t*(u)) in R^{|T|+n+1} over the graph points of every
/// f_t* sampled on grids anchored at xbar. Declared closure points carry no
/// index t and are not included.
Matrix graph_normal_generators(const Instance& inst, const Vector& xbar);

/// p* in D*F(0,xbar)(x*)  iff  (p*, -x*, -<x*,xbar>) lies in the cone generated
/// by (-e_t, u, f_t*(u)) over sampled graph points of every f_t*.
ConeMembership coderivative_member(const Instance& inst, const Vector& xbar, const Vector& p_star,
                                   const Vector& x_star);

// ---------------------------------------------------------------------------
// Quotient sampling
// ---------------------------------------------------------------------------

struct QuotientSample {
  Parameter p;
  Vector x;
  double numerator = 0.0;    // dist(x; F(p))
  double denominator = 0.0;  // dist(p; F^{-1}(x)) = residual
  /// numerator / denominator with 0/0 := 0 and positive/0 := inf.
  double ratio = 0.0;
};

QuotientSample quotient_sample(const InequalitySystem& system, const Parameter& p, const Vector& x,
                               const Tolerances& tol = {});

struct TrendRow {
  double radius = 0.0;
  double max_ratio = 0.0;
  std::size_t samples = 0;
  std::size_t violated = 0;  // samples with x outside F(p)
  std::size_t infinite = 0;  // samples with F(p) empty
};

struct SampleOptions {
  std::vector<double> radii{0.1, 0.01, 0.001};
  std::size_t samples_per_radius = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// For each radius r, the largest finite quotient over seeded uniform samples
/// ||p||_inf <= r, ||x - xbar|| <= r. The result does not depend on `threads`.
std::vector<TrendRow> lip_sample(const Instance& inst, const Vector& xbar,
                                 const SampleOptions& options = {});

}  // namespace sipstab
