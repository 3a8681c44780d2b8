#pragma once

#include <sipstab/charset.hpp>
#include <sipstab/tolerances.hpp>
#include <sipstab/types.hpp>

#include <optional>
#include <vector>

namespace sipstab {

/// lambda >= 0 with sum 1; `support` lists indices with lambda_i > 1e-12.
struct SimplexWeights {
  Vector lambda;
  std::vector<std::size_t> support;

  static SimplexWeights from(Vector lambda);
};

/// mu >= 0, no normalization.
struct ConeWeights {
  Vector mu;
};

struct MinNormPoint {
  Vector point;
  SimplexWeights weights;
  int iterations = 0;
};

/// Smallest-norm element of co{columns of `points`} by Wolfe's algorithm.
/// Throws ValidationError when `points` has no columns.
MinNormPoint min_norm_point(const Matrix& points, const Tolerances& tol = {});

/// min_q <z, q - z> over the columns q; nonnegative at the exact min-norm point.
double wolfe_gap(const Matrix& points, const Vector& z);

/// Which slice of the characteristic set the constrained problem works on:
/// the graph side C(0) with alpha = <u,xbar>, or the epigraph side H(0),
/// i.e. C(0) + R_+(0,1), with the same equation.
enum class SliceSide { kGraph, kEpigraph };

struct SliceMinNorm {
  Vector u;
  /// alpha of the hull element. On the epigraph side the slice point is
  /// (u, <u,xbar>) = (u, alpha) + s (0, 1) with s >= 0.
  double alpha = 0.0;
  /// Weights over cloud.generators() (points then closure points).
  SimplexWeights weights;
};

/// min ||u|| over { (u,alpha) in co(points U closure points) : alpha = <u,xbar> }
/// (or the same slice of the epigraph hull). Returns nullopt when the slice is
/// empty. Solved exactly: vertices of a hyperplane section of a polytope are
/// generators lying on the hyperplane or crossings of segments between
/// generators on opposite sides, and the min-norm point of their hull is found
/// with min_norm_point.
std::optional<SliceMinNorm> constrained_min_norm(const CharacteristicCloud& cloud,
                                                 const Vector& xbar,
                                                 SliceSide side = SliceSide::kGraph,
                                                 const Tolerances& tol = {});

struct ConeDistance {
  double distance = 0.0;
  ConeWeights weights;
  /// target - generators * mu
  Vector residual;
};

/// min ||target - G mu|| over mu >= 0 (Lawson-Hanson NNLS). Columns of G are
/// the generators.
ConeDistance cone_distance(const Matrix& generators, const Vector& target,
                           const Tolerances& tol = {});

struct FractionalSup {
  /// sup over co(cloud) of [<u,x> - alpha]_+ / ||u|| (0/0 := 0); kInfinity
  /// when a hull element has u = 0 and alpha < <0,x>.
  double value = 0.0;
  bool finite = true;
  /// The maximizing hull element (meaningful when value > 0 and finite).
  SimplexWeights weights;
  Vector u;
  double alpha = 0.0;
};

/// Evaluates the fractional program through the homogenized NNLS
///   min_{mu >= 0} ||U mu||^2 + (s N'mu - 1)^2,   N_i = <u_i,x> - alpha_i,
/// whose optimal value is 1 / (1 + s^2 sup^2); the maximizing hull element is
/// mu / sum(mu).
FractionalSup fractional_sup(const CharacteristicCloud& cloud, const Vector& x,
                             const Tolerances& tol = {});

}  // namespace sipstab
