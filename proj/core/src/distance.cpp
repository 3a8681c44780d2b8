#include <sipstab/error.hpp>
#include <sipstab/format.hpp>
#include <sipstab/minnorm.hpp>
#include <sipstab/stability.hpp>

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <variant>

namespace sipstab {
namespace {

// { y : A y <= b }, one row per affine piece.
struct Polyhedron {
  Matrix A;
  Vector b;
};

struct Sublevel {
  const ConvexFunction* f;
  double level;  // f(y) <= level
};

using ConvexSet = std::variant<Polyhedron, Sublevel>;

// Least-distance program min ||w|| s.t. A w <= b - A z through the NNLS
// min ||E u - e_{n+1}||, E = [-A' ; (A z - b)'] (Lawson-Hanson); the
// projection is z + w with w = -r_{1..n} / r_{n+1}, r = E u - e_{n+1}, and
// r = 0 exactly when the polyhedron is empty (r_{n+1} < 0 otherwise).
Vector project(const Polyhedron& poly, const Vector& z) {
  const Vector h = poly.A * z - poly.b;
  if (h.maxCoeff() <= 0.0) return z;
  const Eigen::Index n = z.size();
  Matrix E(n + 1, poly.A.rows());
  E.topRows(n) = -poly.A.transpose();
  E.row(n) = h.transpose();
  const auto cd = cone_distance(E, Vector::Unit(n + 1, n));
  const Vector r = -cd.residual;
  const double scale = 1.0 + poly.A.cwiseAbs().maxCoeff() * (1.0 + z.lpNorm<Eigen::Infinity>());
  if (!(r(n) < -1e-14 * scale)) throw InfeasibleError("the polyhedral constraints have no common point");
  return z - r.head(n) / r(n);
}

// Euclidean projection onto {1/2 y'Qy + c'y + d <= level}: y(nu) = (I + nu Q)^{-1}(z - nu c)
// with nu >= 0 the root of f(y(nu)) = level, which is decreasing in nu.
Vector project(const Sublevel& s, const Vector& z) {
  if (evaluate(*s.f, z) <= s.level) return z;
  const auto& q = std::get<Quadratic>(s.f->form());
  const Matrix& basis = s.f->eigenvectors();
  const Vector& lam = s.f->eigenvalues();
  const Vector zt = basis.transpose() * z;
  const Vector ct = basis.transpose() * q.c;

  auto point = [&](double nu) {
    Vector y(zt.size());
    for (Eigen::Index i = 0; i < zt.size(); ++i) y(i) = (zt(i) - nu * ct(i)) / (1.0 + nu * lam(i));
    return y;
  };
  auto excess = [&](double nu) {
    const Vector y = point(nu);
    double v = q.d - s.level;
    for (Eigen::Index i = 0; i < y.size(); ++i) v += 0.5 * lam(i) * y(i) * y(i) + ct(i) * y(i);
    return v;
  };

  double hi = 1.0;
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw InfeasibleError("quadratic constraint has an empty sublevel set");
  }
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      excess, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  // Take the feasible end of the final bracket.
  return basis * point(bracket.second);
}

std::vector<ConvexSet> feasible_pieces(const InequalitySystem& system, const Parameter& p) {
  std::vector<ConvexSet> sets;
  std::vector<std::pair<const Vector*, double>> rows;
  for (std::size_t t = 0; t < system.size(); ++t) {
    const auto& f = system[t].function;
    const double pt = p.values(static_cast<Eigen::Index>(t));
    if (const auto* aff = std::get_if<Affine>(&f.form())) {
      rows.emplace_back(&aff->a, aff->b + pt);
    } else if (const auto* max = std::get_if<MaxAffine>(&f.form())) {
      for (const auto& piece : max->pieces) rows.emplace_back(&piece.a, piece.b + pt);
    } else {
      sets.emplace_back(Sublevel{&f, pt});
    }
  }
  if (!rows.empty()) {
    Polyhedron poly{Matrix(static_cast<Eigen::Index>(rows.size()), system.dimension()),
                    Vector(static_cast<Eigen::Index>(rows.size()))};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      poly.A.row(static_cast<Eigen::Index>(i)) = rows[i].first->transpose();
      poly.b(static_cast<Eigen::Index>(i)) = rows[i].second;
    }
    sets.insert(sets.begin(), std::move(poly));
  }
  return sets;
}

}  // namespace

PrimalDistance distance_primal(const InequalitySystem& system, const Parameter& p, const Vector& x,
                               const Tolerances& tol) {
  if (x.size() != system.dimension()) throw DimensionError("point dimension mismatch");
  if (p.values.size() != static_cast<Eigen::Index>(system.size())) {
    throw DimensionError("parameter size does not match the number of constraints");
  }
  PrimalDistance out;
  if (residual(system, p, x) == 0.0) {
    out.projection = x;
    return out;
  }

  const auto sets = feasible_pieces(system, p);
  auto apply = [](const ConvexSet& set, const Vector& z) {
    return std::visit([&](const auto& s) { return project(s, z); }, set);
  };

  Vector y = x;
  if (sets.size() == 1) {
    y = apply(sets.front(), x);
  } else {
    // Dykstra over the polyhedral block and the quadratic sublevel sets:
    // y_k = P_k(y + e_k), e_k <- y + e_k - y_k.
    std::vector<Vector> corrections(sets.size(), Vector::Zero(x.size()));
    const int max_cycles = 200000;
    out.converged = false;
    for (out.cycles = 1; out.cycles <= max_cycles; ++out.cycles) {
      const Vector start = y;
      double correction_change = 0.0;
      for (std::size_t k = 0; k < sets.size(); ++k) {
        const Vector z = y + corrections[k];
        y = apply(sets[k], z);
        Vector next = z - y;
        correction_change = std::max(correction_change, (next - corrections[k]).lpNorm<Eigen::Infinity>());
        corrections[k] = std::move(next);
      }
      const double scale = 1.0 + y.lpNorm<Eigen::Infinity>() + x.lpNorm<Eigen::Infinity>();
      if ((y - start).lpNorm<Eigen::Infinity>() <= tol.projection * scale &&
          correction_change <= tol.projection * scale) {
        out.converged = true;
        break;
      }
    }
    const double left = residual(system, p, y);
    if (!out.converged && left > 1e-6 * (1.0 + x.norm())) {
      throw InfeasibleError("projection did not reach F(p) (residual " + format_double(left) +
                            "); the feasible set appears to be empty");
    }
  }
  out.projection = y;
  out.value = (y - x).norm();
  return out;
}

QuotientSample quotient_sample(const InequalitySystem& system, const Parameter& p, const Vector& x,
                               const Tolerances& tol) {
  QuotientSample s{p, x, 0.0, residual(system, p, x), 0.0};
  if (s.denominator <= 0.0) return s;  // x in F(p): 0/0 := 0
  try {
    s.numerator = distance_primal(system, p, x, tol).value;
  } catch (const InfeasibleError&) {
    s.numerator = kInfinity;  // inf of the empty set
  }
  s.ratio = s.numerator / s.denominator;
  return s;
}

}  // namespace sipstab
