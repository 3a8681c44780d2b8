#pragma once

#include <sipstab/inequality_system.hpp>

#include <cstddef>
#include <vector>

namespace sipstab {

/// One sampling grid per constraint index.
using GridSet = std::vector<SampleGrid>;

GridSet uniform_grids(const InequalitySystem& system, const SampleGrid& grid = {});

/// Returns a copy of `grids` with `x` added as an anchor for every index, so
/// the linearization contains the tangent row rge(df_t) at x.
GridSet with_anchor(GridSet grids, const Vector& x);

/// <a,x> <= b + rho, generated by the conjugate-graph point (a, b) of the
/// constraint `origin`. Rows of one origin are distinct within 1e-12.
struct LinearRow {
  Vector a;
  double b = 0.0;
  std::size_t origin = 0;
};

struct LinearSystem {
  int dimension = 0;
  std::vector<LinearRow> rows;
};

/// Replaces each f_t by the affine minorants <u,x> - f_t*(u) over sampled
/// (u, f_t*(u)) in gph f_t*. Throws ValidationError when a grid is missing or
/// empty.
LinearSystem linearize_system(const InequalitySystem& system, const GridSet& grids);

/// rho_p(t,u) = p_t, one value per linear row.
struct EmbeddedParameter {
  Vector values;
  double norm() const { return values.size() == 0 ? 0.0 : values.lpNorm<Eigen::Infinity>(); }
};

EmbeddedParameter embed_parameter(const Parameter& p, const LinearSystem& lin);

/// sup over rows of [<a,x> - b - rho]_+.
double linear_residual(const LinearSystem& lin, const EmbeddedParameter& rho, const Vector& x);

/// max over probes of (convex residual - linearized residual); nonnegative
/// since the linearization only relaxes sigma(p).
double linearization_gap(const InequalitySystem& system, const LinearSystem& lin,
                         const Parameter& p, const std::vector<Vector>& probes);

}  // namespace sipstab
