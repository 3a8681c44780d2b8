#pragma once

#include <sipstab/charset.hpp>
#include <sipstab/inequality_system.hpp>
#include <sipstab/linearize.hpp>
#include <sipstab/tolerances.hpp>

#include <vector>

namespace sipstab {

/// A system together with everything the dual computations need: conjugate
/// sampling grids, declared closure points of C(0) and solver tolerances.
struct Instance {
  InequalitySystem system;
  GridSet grids;
  std::vector<CloudPoint> closure_points;
  Tolerances tol;

  explicit Instance(InequalitySystem sys, const SampleGrid& grid = {})
      : system(std::move(sys)), grids(uniform_grids(system, grid)) {}

  /// C(p) from the grids; closure points are attached only at p = 0, where
  /// they were declared.
  CharacteristicCloud cloud(const Parameter& p) const;
  CharacteristicCloud cloud(const Parameter& p, const GridSet& custom_grids) const;
};

}  // namespace sipstab
