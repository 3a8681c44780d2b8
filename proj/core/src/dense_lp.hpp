#pragma once

#include <sipstab/types.hpp>

namespace sipstab::detail {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;
  /// Multipliers of the rows: A'duals <= c, and b'duals = value at the optimum.
  Vector duals;
  double value = 0.0;
};

// Two-phase dense tableau simplex with Bland's rule for
//   minimize c'x  s.t.  A x = b,  x >= 0.
// Intended for programs with few rows; columns may number in the thousands.
LpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& c,
                           double tol = 1e-10);

}  // namespace sipstab::detail
