#pragma once

#include <sipstab/inequality_system.hpp>

#include <cstdint>

namespace sipstab {

struct RandomSystemOptions {
  int max_dimension = 3;
  int max_constraints = 8;
};

struct RandomSystem {
  InequalitySystem system;
  /// A point with sup_t f_t(slater_point) = -slack.
  Vector slater_point;
  double slack = 0.0;
};

/// A system satisfying the strong Slater condition, mixing affine,
/// quadratic (possibly singular) and max-affine constraints. Deterministic
/// in `seed`.
RandomSystem random_ssc_system(std::uint64_t seed, const RandomSystemOptions& options = {});

}  // namespace sipstab
