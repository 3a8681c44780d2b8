#pragma once

#include <sipstab/inequality_system.hpp>
#include <sipstab/linearize.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sipstab {

/// A generator (u, alpha) of the characteristic set in R^{n+1}.
struct CloudPoint {
  Vector u;
  double alpha = 0.0;
  /// Constraint index the point came from; empty for declared closure points.
  std::optional<std::size_t> origin;
};

/// Finite description of C(p) = co U_t gph (f_t - p_t)*. The set H(p) is
/// C(p) plus the recession ray (0, 1). Closure points are user-declared
/// members of the weak*-closure that no finite sample reaches.
struct CharacteristicCloud {
  int dimension = 0;
  std::vector<CloudPoint> points;
  std::vector<CloudPoint> closure_points;

  std::size_t size() const noexcept { return points.size() + closure_points.size(); }
  /// Columns (u; alpha) of points followed by closure points, (n+1) x m.
  Matrix generators(bool include_closure = true) const;
  /// The point with flat index i in the ordering used by generators().
  const CloudPoint& at(std::size_t i) const;
};

/// Cloud points (u, f_t*(u) + p_t) over the sampled conjugate graphs; a
/// linear constraint contributes exactly (a_t, b_t + p_t).
CharacteristicCloud build_characteristic(const InequalitySystem& system, const Parameter& p,
                                         const GridSet& grids);

/// Wraps declared closure points (u, alpha) given as R^{n+1} vectors.
std::vector<CloudPoint> closure_points_from(const std::vector<Vector>& points, int dimension);

struct ActiveIndexSet {
  double epsilon = 0.0;
  std::vector<std::size_t> indices;
};

/// T_eps(xbar) = { t : f_t(xbar) >= -eps }. Throws InfeasibleError unless
/// xbar is in F(0) within `feasibility`.
ActiveIndexSet active_indices(const InequalitySystem& system, const Vector& xbar, double epsilon,
                              double feasibility = 1e-9);

/// The part of C(0) generated by eps-active indices (no closure points).
CharacteristicCloud epsilon_active_cloud(const InequalitySystem& system, const Vector& xbar,
                                         double epsilon, const GridSet& grids,
                                         double feasibility = 1e-9);

/// One row per generator: origin label, u coordinates, alpha. Closure points
/// carry the label "closure".
void write_cloud_csv(std::ostream& out, const CharacteristicCloud& cloud,
                     const InequalitySystem& system);

}  // namespace sipstab
