#include <sipstab/error.hpp>
#include <sipstab/random_system.hpp>

#include <algorithm>
#include <random>

namespace sipstab {

RandomSystem random_ssc_system(std::uint64_t seed, const RandomSystemOptions& options) {
  if (options.max_dimension < 1 || options.max_constraints < 1) {
    throw ValidationError("random systems need at least one dimension and one constraint");
  }
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::normal_distribution<double> normal;
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
  };

  const int n = uniform_int(1, options.max_dimension);
  const int m = uniform_int(1, options.max_constraints);
  Vector xhat(n);
  for (int i = 0; i < n; ++i) xhat(i) = uniform(-1.0, 1.0);

  std::vector<Constraint> constraints;
  double worst = -kInfinity;
  for (int t = 0; t < m; ++t) {
    const double s = uniform(0.1, 1.0);
    const std::string label = "r" + std::to_string(t);
    switch (uniform_int(0, 2)) {
      case 0: {
        const Vector a = gaussian(n, 1).col(0);
        constraints.push_back({label, ConvexFunction::affine(a, a.dot(xhat) + s)});
        break;
      }
      case 1: {
        const Matrix b = gaussian(n, uniform_int(1, n));
        const Matrix q = b * b.transpose();
        const Vector c = gaussian(n, 1).col(0);
        const double d = -s - 0.5 * xhat.dot(q * xhat) - c.dot(xhat);
        constraints.push_back({label, ConvexFunction::quadratic(0.5 * (q + q.transpose()), c, d)});
        break;
      }
      default: {
        std::vector<AffinePiece> pieces;
        const int k = uniform_int(2, 3);
        for (int i = 0; i < k; ++i) {
          const Vector a = gaussian(n, 1).col(0);
          pieces.push_back({a, a.dot(xhat) + s + uniform(0.0, 0.5)});
        }
        constraints.push_back({label, ConvexFunction::max_affine(std::move(pieces))});
        break;
      }
    }
    worst = std::max(worst, evaluate(constraints.back().function, xhat));
  }
  return {InequalitySystem(n, std::move(constraints)), xhat, -worst};
}

}  // namespace sipstab
