#pragma once

namespace sipstab {

/// Every numerical threshold used by the solvers and certificates.
struct Tolerances {
  /// Constraint satisfaction (residuals, slice equalities, simplex sums).
  double feasibility = 1e-9;
  /// Optimality tests (Wolfe gap, NNLS dual feasibility).
  double optimality = 1e-9;
  /// Cone-membership threshold for Farkas, coderivative and stationarity tests.
  double membership = 1e-7;
  /// Upper edge of the "inconclusive" residual band for stationarity.
  double inconclusive = 1e-3;
  /// Stopping threshold of the primal projection (Dykstra) iteration.
  double projection = 1e-12;
  /// Strong Slater threshold: sup_t f_t(x) must be below -slater.
  double slater = 1e-9;
};

}  // namespace sipstab
