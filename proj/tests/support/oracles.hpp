#pragma once

// Reference computations used to check the library. None of them call the
// solvers under test.

#include <sipstab/inequality_system.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using sipstab::Matrix;
using sipstab::Vector;

// Every subset of columns (size <= k+1) whose affine hull projection of the
// origin has nonnegative barycentric weights; the smallest such norm is the
// min-norm point of the hull.
inline double brute_force_min_norm(const Matrix& P) {
  const auto k = P.rows();
  const auto m = static_cast<int>(P.cols());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(idx.size());
    if (s > k + 1) continue;
    Matrix S(k, s);
    for (Eigen::Index j = 0; j < s; ++j) S.col(j) = P.col(idx[j]);
    Matrix K = Matrix::Zero(s + 1, s + 1);
    K.topLeftCorner(s, s) = S.transpose() * S;
    K.block(0, s, s, 1).setOnes();
    K.block(s, 0, 1, s).setOnes();
    Vector rhs = Vector::Zero(s + 1);
    rhs(s) = 1.0;
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible()) continue;
    const Vector sol = lu.solve(rhs);
    const Vector lambda = sol.head(s);
    if (lambda.minCoeff() < -1e-12) continue;
    best = std::min(best, (S * lambda).norm());
  }
  return best;
}

// min ||target - G mu|| over mu >= 0 by enumerating supports.
inline double brute_force_cone_distance(const Matrix& G, const Vector& target) {
  const auto m = static_cast<int>(G.cols());
  double best = target.norm();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    Matrix S(G.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) S.col(static_cast<Eigen::Index>(j)) = G.col(idx[j]);
    const Vector mu = S.completeOrthogonalDecomposition().solve(target);
    if (mu.size() > 0 && mu.minCoeff() < -1e-12) continue;
    best = std::min(best, (target - S * mu).norm());
  }
  return best;
}

inline Matrix random_cloud(std::mt19937_64& rng, int k, int m) {
  std::normal_distribution<double> g;
  Matrix P(k, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < k; ++i) P(i, j) = g(rng);
  }
  // Shift so the origin is sometimes inside the hull and sometimes not.
  std::uniform_real_distribution<double> shift(-1.5, 1.5);
  Vector c(k);
  for (int i = 0; i < k; ++i) c(i) = shift(rng);
  return P.colwise() + c;
}

// Distance from x to the halfspace <a,y> <= b.
inline double halfspace_distance(const Vector& a, double b, const Vector& x) {
  return std::max(0.0, a.dot(x) - b) / a.norm();
}

// Distance from x to the ball of radius r around the origin.
inline double ball_distance(const Vector& x, double r) { return std::max(0.0, x.norm() - r); }

// Feasible set of {x^2 - 1 <= p} is [-sqrt(1+p), sqrt(1+p)], empty for p < -1.
inline double parabola_distance(double x, double p) {
  if (p < -1.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, std::abs(x) - std::sqrt(1.0 + p));
}

inline double parabola_residual(double x, double p) { return std::max(0.0, x * x - 1.0 - p); }

inline Vector uniform_in_box(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

}  // namespace oracle
