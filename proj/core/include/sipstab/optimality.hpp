#pragma once

#include <sipstab/objective.hpp>
#include <sipstab/stability.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sipstab {

/// The candidate consequence <v,x> <= alpha.
struct ConsequenceQuery {
  Vector v;
  double alpha = 0.0;
};

struct ConsequenceResult {
  bool holds = false;
  /// Distance from (v, alpha) to the cone generated by C(p) and (0, 1).
  double residual = 0.0;
  /// Weights over the cloud points, then closure points, then the ray (0, 1).
  ConeWeights weights;
  /// Feasible points checked against a "holds" verdict, and how many of them
  /// violated the query by more than the membership tolerance.
  std::size_t soundness_samples = 0;
  std::size_t soundness_violations = 0;
};

struct SoundnessOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

/// Is <v,x> <= alpha implied by sigma(p)? Throws InfeasibleError when F(p)
/// is empty. A "holds" verdict is cross-checked on feasible points obtained
/// by projecting seeded random points onto F(p).
ConsequenceResult farkas_consequence(const Instance& inst, const Parameter& p,
                                     const ConsequenceQuery& query,
                                     const SoundnessOptions& soundness = {});

/// v in N(xbar; F(0)), i.e. <v,x> <= <v,xbar> is a consequence of sigma(0).
ConsequenceResult normal_cone_member(const Instance& inst, const Vector& xbar, const Vector& v,
                                     const SoundnessOptions& soundness = {});

enum class StationarityStatus { kSatisfied, kInconclusive, kViolated };

const char* to_string(StationarityStatus status);

struct StationarityCertificate {
  /// Distance of -(grad_p, grad_x, <grad_x, xbar>) to the normal-data cone.
  double residual = 0.0;
  ConeWeights weights;
  StationarityStatus status = StationarityStatus::kViolated;
  bool satisfied = false;
  Vector grad_p;
  Vector grad_x;
};

StationarityCertificate check_stationarity_smooth(const Instance& inst, const Vector& xbar,
                                                  const Vector& grad_p, const Vector& grad_x);

struct UpperStationarity {
  std::vector<StationarityCertificate> certificates;
  bool all_satisfied = true;
  /// No upper subgradient was supplied.
  bool vacuous = false;
};

/// One certificate per upper subgradient (grad_p, grad_x).
UpperStationarity check_stationarity_upper(const Instance& inst, const Vector& xbar,
                                           const std::vector<std::pair<Vector, Vector>>& upper);

/// Evaluates the declared objective at (0, xbar) and dispatches to the
/// smooth or upper check.
UpperStationarity check_stationarity(const Instance& inst, const Vector& xbar,
                                     const Objective& objective);

}  // namespace sipstab
