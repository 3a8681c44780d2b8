#include <sipstab/error.hpp>
#include <sipstab/minnorm.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace sipstab {
namespace {

constexpr double kWeightFloor = 1e-14;

// Minimizes ||sum_i v_i p_i|| over the affine hull (sum v = 1) of the given
// columns, parametrized as p_0 + D c with D = [p_i - p_0].
Vector affine_minimizer(const Matrix& points, const std::vector<Eigen::Index>& corral) {
  const auto s = static_cast<Eigen::Index>(corral.size());
  Vector v(s);
  if (s == 1) {
    v(0) = 1.0;
    return v;
  }
  const Vector base = points.col(corral[0]);
  Matrix d(points.rows(), s - 1);
  for (Eigen::Index i = 1; i < s; ++i) d.col(i - 1) = points.col(corral[i]) - base;
  const Vector c = d.completeOrthogonalDecomposition().solve(-base);
  v(0) = 1.0 - c.sum();
  v.tail(s - 1) = c;
  return v;
}

Vector combine(const Matrix& points, const std::vector<Eigen::Index>& corral, const Vector& w) {
  Vector x = Vector::Zero(points.rows());
  for (std::size_t i = 0; i < corral.size(); ++i) {
    x += w(static_cast<Eigen::Index>(i)) * points.col(corral[i]);
  }
  return x;
}

struct NnlsResult {
  Vector x;
  int iterations = 0;
};

// Lawson-Hanson active set for min ||E x - f||, x >= 0. Columns in the passive
// set stay linearly independent, so the inner least-squares solves are
// well-posed.
NnlsResult nnls(const Matrix& e, const Vector& f) {
  const Eigen::Index m = e.cols();
  NnlsResult out;
  out.x = Vector::Zero(m);
  if (m == 0) return out;
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(1.0, e.cwiseAbs().colwise().sum().maxCoeff()) *
                     static_cast<double>(std::max(m, e.rows()));
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  Vector& x = out.x;
  Vector w = e.transpose() * (f - e * x);

  const int max_iter = static_cast<int>(3 * m + 50);
  for (; out.iterations < max_iter; ++out.iterations) {
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      std::vector<Eigen::Index> cols;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[j]) cols.push_back(j);
      }
      Matrix ep(e.rows(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) ep.col(static_cast<Eigen::Index>(k)) = e.col(cols[k]);
      const Vector z = ep.colPivHouseholderQr().solve(f);

      bool all_positive = true;
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (z(k) <= 0.0) all_positive = false;
      }
      if (all_positive) {
        for (std::size_t k = 0; k < cols.size(); ++k) x(cols[k]) = z(static_cast<Eigen::Index>(k));
        break;
      }
      double alpha = 1.0;
      Eigen::Index blocking = -1;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const double zk = z(static_cast<Eigen::Index>(k));
        const double xk = x(cols[k]);
        if (zk <= 0.0 && xk / (xk - zk) < alpha) {
          alpha = xk / (xk - zk);
          blocking = cols[k];
        }
      }
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const auto j = cols[k];
        x(j) += alpha * (z(static_cast<Eigen::Index>(k)) - x(j));
        if (j == blocking || x(j) <= 0.0) {
          x(j) = 0.0;
          passive[j] = false;
        }
      }
      if (std::none_of(passive.begin(), passive.end(), [](bool b) { return b; })) break;
    }
    w = e.transpose() * (f - e * x);
    // A column that re-enters with no progress signals roundoff stagnation.
    if (!passive[enter] && w(enter) > tol) w(enter) = 0.0;
  }
  return out;
}

}  // namespace

SimplexWeights SimplexWeights::from(Vector lambda) {
  SimplexWeights out;
  out.lambda = std::move(lambda);
  for (Eigen::Index i = 0; i < out.lambda.size(); ++i) {
    if (out.lambda(i) > 1e-12) out.support.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

double wolfe_gap(const Matrix& points, const Vector& z) {
  return (points.transpose() * z).minCoeff() - z.squaredNorm();
}

MinNormPoint min_norm_point(const Matrix& points, const Tolerances& tol) {
  const Eigen::Index m = points.cols();
  if (m == 0) throw ValidationError("min-norm point of an empty set");

  const Vector sq = points.colwise().squaredNorm().transpose();
  Eigen::Index start = 0;
  sq.minCoeff(&start);
  const double scale = std::max(1.0, sq.maxCoeff());

  std::vector<Eigen::Index> corral{start};
  Vector w = Vector::Ones(1);
  Vector x = points.col(start);

  MinNormPoint out;
  const int max_major = static_cast<int>(10 * m + 100);
  for (; out.iterations < max_major; ++out.iterations) {
    Eigen::Index j = 0;
    const double lowest = (points.transpose() * x).minCoeff(&j);
    if (x.squaredNorm() - lowest <= tol.optimality * 1e-3 * scale) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);
    w.conservativeResize(w.size() + 1);
    w(w.size() - 1) = 0.0;

    for (int minor = 0; minor < 4 * static_cast<int>(corral.size()) + 10; ++minor) {
      const Vector v = affine_minimizer(points, corral);
      if ((v.array() > kWeightFloor).all()) {
        w = v;
        break;
      }
      double theta = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) <= kWeightFloor) {
          const double step = w(i) / (w(i) - v(i));
          if (step < theta) {
            theta = step;
            blocking = i;
          }
        }
      }
      w = w + theta * (v - w);
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_w;
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (i != blocking && w(i) > kWeightFloor) {
          kept.push_back(corral[i]);
          kept_w.push_back(w(i));
        }
      }
      corral = std::move(kept);
      w = Eigen::Map<Vector>(kept_w.data(), static_cast<Eigen::Index>(kept_w.size()));
      w /= w.sum();
    }
    x = combine(points, corral, w);
  }

  Vector lambda = Vector::Zero(m);
  for (std::size_t i = 0; i < corral.size(); ++i) lambda(corral[i]) = w(static_cast<Eigen::Index>(i));
  out.point = points * lambda;
  out.weights = SimplexWeights::from(std::move(lambda));
  return out;
}

std::optional<SliceMinNorm> constrained_min_norm(const CharacteristicCloud& cloud,
                                                 const Vector& xbar, SliceSide side,
                                                 const Tolerances& tol) {
  const int n = cloud.dimension;
  if (xbar.size() != n) throw DimensionError("reference point dimension mismatch");
  const std::size_t m = cloud.size();

  // Signed offsets g_i = alpha_i - <u_i, xbar>; the slice is sum lambda_i g_i = 0
  // (graph side) or <= 0 (epigraph side, the ray (0,1) absorbing the rest).
  std::vector<double> g(m);
  std::vector<int> sign(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& pt = cloud.at(i);
    g[i] = pt.alpha - pt.u.dot(xbar);
    const double scale = 1.0 + std::abs(pt.alpha) + pt.u.norm() * xbar.norm();
    sign[i] = std::abs(g[i]) <= tol.feasibility * scale ? 0 : (g[i] > 0 ? 1 : -1);
  }

  // Each slice vertex is a single cloud point or the crossing of a segment
  // between a point above and a point below the hyperplane. There are O(m^2)
  // of them, so Wolfe runs on an active set and a linear oracle over all
  // vertices supplies the next column until the gap closes.
  struct Generator {
    std::size_t i, j;
    double wi, wj;
  };
  std::vector<std::size_t> singles, above, below;
  for (std::size_t i = 0; i < m; ++i) {
    if (sign[i] == 0 || (side == SliceSide::kEpigraph && sign[i] < 0)) singles.push_back(i);
    if (sign[i] > 0) above.push_back(i);
    if (sign[i] < 0) below.push_back(i);
  }
  if (singles.empty() && (above.empty() || below.empty())) return std::nullopt;

  auto crossing = [&](std::size_t i, std::size_t j) {
    const double wi = -g[j] / (g[i] - g[j]);
    return Generator{i, j, wi, 1.0 - wi};
  };
  auto column = [&](const Generator& gk) -> Vector { return gk.wi * cloud.at(gk.i).u + gk.wj * cloud.at(gk.j).u; };
  // Vertex minimizing <z, v>, from the per-point values c_i = <z, u_i>.
  auto oracle = [&](const Vector& z) {
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = cloud.at(i).u.dot(z);
    Generator best{0, 0, 0.0, 0.0};
    double lowest = kInfinity;
    for (std::size_t i : singles) {
      if (c[i] < lowest) {
        lowest = c[i];
        best = {i, i, 1.0, 0.0};
      }
    }
    for (std::size_t i : above) {
      for (std::size_t j : below) {
        const Generator gk = crossing(i, j);
        const double value = gk.wi * c[i] + gk.wj * c[j];
        if (value < lowest) {
          lowest = value;
          best = gk;
        }
      }
    }
    return std::pair{best, lowest};
  };

  std::vector<Generator> gens{singles.empty() ? crossing(above.front(), below.front())
                                              : Generator{singles.front(), singles.front(), 1.0, 0.0}};
  MinNormPoint mn;
  for (std::size_t round = 0;; ++round) {
    Matrix u(n, static_cast<Eigen::Index>(gens.size()));
    double scale = 1.0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      u.col(static_cast<Eigen::Index>(k)) = column(gens[k]);
      scale = std::max(scale, u.col(static_cast<Eigen::Index>(k)).squaredNorm());
    }
    mn = min_norm_point(u, tol);
    const auto [next, lowest] = oracle(mn.point);
    if (mn.point.squaredNorm() - lowest <= tol.optimality * 1e-3 * scale) break;
    const bool known = std::any_of(gens.begin(), gens.end(), [&](const Generator& gk) {
      return gk.i == next.i && gk.j == next.j;
    });
    if (known || round > 10 * m + 100) break;
    // Keep the support and add the new vertex.
    std::vector<Generator> kept;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      if (mn.weights.lambda(static_cast<Eigen::Index>(k)) > 0.0) kept.push_back(gens[k]);
    }
    kept.push_back(next);
    gens = std::move(kept);
  }

  Vector lambda = Vector::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const double weight = mn.weights.lambda(static_cast<Eigen::Index>(k));
    if (weight == 0.0) continue;
    lambda(static_cast<Eigen::Index>(gens[k].i)) += weight * gens[k].wi;
    lambda(static_cast<Eigen::Index>(gens[k].j)) += weight * gens[k].wj;
  }
  SliceMinNorm out;
  out.u = Vector::Zero(n);
  out.alpha = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double li = lambda(static_cast<Eigen::Index>(i));
    if (li == 0.0) continue;
    out.u += li * cloud.at(i).u;
    out.alpha += li * cloud.at(i).alpha;
  }
  out.weights = SimplexWeights::from(std::move(lambda));
  return out;
}

ConeDistance cone_distance(const Matrix& generators, const Vector& target, const Tolerances&) {
  if (generators.cols() == 0) throw ValidationError("cone distance needs at least one generator");
  if (generators.rows() != target.size()) throw DimensionError("cone target dimension mismatch");
  auto solved = nnls(generators, target);
  ConeDistance out;
  out.residual = target - generators * solved.x;
  out.distance = out.residual.norm();
  out.weights.mu = std::move(solved.x);
  return out;
}

FractionalSup fractional_sup(const CharacteristicCloud& cloud, const Vector& x,
                             const Tolerances&) {
  const int n = cloud.dimension;
  if (x.size() != n) throw DimensionError("point dimension mismatch");
  const Matrix gen = cloud.generators(true);
  const Eigen::Index m = gen.cols();
  if (m == 0) throw ValidationError("fractional sup over an empty cloud");

  const Matrix u = gen.topRows(n);
  const Vector numer = u.transpose() * x - gen.row(n).transpose();

  FractionalSup out;
  out.u = Vector::Zero(n);
  out.weights = SimplexWeights::from(Vector::Zero(m));
  if (numer.maxCoeff() <= 0.0) return out;

  const double u_scale = std::max(1e-300, u.colwise().norm().maxCoeff());
  const double s = std::max(u_scale, 1e-12) / numer.cwiseAbs().maxCoeff();
  Matrix e(n + 1, m);
  e.topRows(n) = u;
  e.row(n) = s * numer.transpose();
  Vector f = Vector::Zero(n + 1);
  f(n) = 1.0;
  const auto solved = nnls(e, f);
  const Vector& mu = solved.x;
  const double total = mu.sum();
  if (total <= 0.0) return out;

  const Vector lambda = mu / total;
  out.u = u * lambda;
  out.alpha = gen.row(n).dot(lambda);
  const double top = numer.dot(lambda);
  const double bottom = out.u.norm();
  out.weights = SimplexWeights::from(lambda);
  if (top <= 0.0) {
    out.value = 0.0;
  } else if (bottom <= 1e-12 * u_scale) {
    out.value = kInfinity;
    out.finite = false;
  } else {
    out.value = top / bottom;
  }
  return out;
}

}  // namespace sipstab
