#include <sipstab/error.hpp>
#include <sipstab/format.hpp>
#include <sipstab/stability.hpp>

#include "dense_lp.hpp"

#include <array>
#include <cmath>

namespace sipstab {
namespace {

struct PrimalSearch {
  Vector x;
  double value = kInfinity;  // sup_t f_t(x)
};

// Rows (a, b) meaning <a,x> - b for every affine piece of a polyhedral system.
std::vector<AffinePiece> polyhedral_rows(const InequalitySystem& system) {
  std::vector<AffinePiece> rows;
  for (const auto& c : system.constraints()) {
    if (const auto* aff = std::get_if<Affine>(&c.function.form())) {
      rows.push_back({aff->a, aff->b});
    } else {
      for (const auto& piece : std::get<MaxAffine>(c.function.form()).pieces) rows.push_back(piece);
    }
  }
  return rows;
}

// max s  s.t.  <a_k, x> - b_k + s <= 0,  -R <= x <= R, solved through its dual
//   min sum y_k b_k + R sum (z+ + z-)  s.t.  sum y_k a_k + z+ - z- = 0, sum y_k = 1,
// which has n + 1 rows however many constraints there are. (x, s) are the
// multipliers of those rows.
PrimalSearch polyhedral_search(const InequalitySystem& system, double radius) {
  const auto rows = polyhedral_rows(system);
  const Eigen::Index n = system.dimension();
  const auto k = static_cast<Eigen::Index>(rows.size());
  Matrix A = Matrix::Zero(n + 1, k + 2 * n);
  Vector cost(k + 2 * n);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    A.col(r).head(n) = row.a;
    A(n, r) = 1.0;
    cost(r) = row.b;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, k + i) = 1.0;
    A(i, k + n + i) = -1.0;
  }
  cost.tail(2 * n).setConstant(radius);
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0;
  const auto lp = detail::solve_standard_lp(A, b, cost);
  PrimalSearch out;
  if (lp.status != detail::LpStatus::kOptimal) return out;
  out.x = lp.duals.head(n).cwiseMax(-radius).cwiseMin(radius);
  out.value = system.max_value(out.x);
  return out;
}

// Subgradient of x -> sup_t f_t(x) from the first maximizing constraint.
Vector max_subgradient(const InequalitySystem& system, const Vector& x, double* value) {
  std::size_t arg = 0;
  double best = -kInfinity;
  for (std::size_t t = 0; t < system.size(); ++t) {
    const double v = evaluate(system[t].function, x);
    if (v > best) {
      best = v;
      arg = t;
    }
  }
  *value = best;
  return subgradient(system[arg].function, x);
}

// Bisection on the sign of a subgradient of a convex function on [-R, R].
PrimalSearch scalar_search(const InequalitySystem& system, double radius) {
  double lo = -radius;
  double hi = radius;
  PrimalSearch out;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * radius; ++it) {
    Vector mid = Vector::Constant(1, 0.5 * (lo + hi));
    double value = 0.0;
    const Vector g = max_subgradient(system, mid, &value);
    if (value < out.value) {
      out.value = value;
      out.x = mid;
    }
    if (g(0) > 0.0) {
      hi = mid(0);
    } else if (g(0) < 0.0) {
      lo = mid(0);
    } else {
      break;
    }
  }
  for (double end : {-radius, radius}) {
    Vector x = Vector::Constant(1, end);
    const double v = system.max_value(x);
    if (v < out.value) {
      out.value = v;
      out.x = x;
    }
  }
  return out;
}

// Central-cut ellipsoid method for min sup_t f_t over the box [-R, R]^n.
PrimalSearch ellipsoid_search(const InequalitySystem& system, double radius) {
  const int n = system.dimension();
  if (n == 1) return scalar_search(system, radius);
  const double nd = n;
  Vector center = Vector::Zero(n);
  Matrix shape = Matrix::Identity(n, n) * (nd * radius * radius);
  PrimalSearch out;
  const int iterations = 60 * n * (n + 1) + 200;
  for (int it = 0; it < iterations; ++it) {
    Vector g = Vector::Zero(n);
    Eigen::Index outside = -1;
    center.cwiseAbs().maxCoeff(&outside);
    if (std::abs(center(outside)) > radius) {
      g(outside) = center(outside) > 0 ? 1.0 : -1.0;
    } else {
      double value = 0.0;
      g = max_subgradient(system, center, &value);
      if (value < out.value) {
        out.value = value;
        out.x = center;
      }
      if (g.norm() == 0.0) break;  // center minimizes the max function
    }
    const Vector pg = shape * g;
    const double denom = g.dot(pg);
    if (!(denom > 0.0)) break;
    const Vector step = pg / std::sqrt(denom);
    center -= step / (nd + 1.0);
    shape = (nd * nd / (nd * nd - 1.0)) * (shape - (2.0 / (nd + 1.0)) * step * step.transpose());
    shape = 0.5 * (shape + shape.transpose());
  }
  return out;
}

}  // namespace

SlaterCertificate check_ssc(const Instance& inst) {
  const auto& system = inst.system;
  SlaterCertificate cert;

  static constexpr std::array<double, 7> kRadii{1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6};
  const bool polyhedral = system.is_linear();
  PrimalSearch best;
  for (double radius : kRadii) {
    auto found = polyhedral ? polyhedral_search(system, radius) : ellipsoid_search(system, radius);
    cert.search_radius = radius;
    if (found.value < best.value) best = std::move(found);
    if (best.value < -inst.tol.slater) break;
  }
  cert.satisfied = best.value < -inst.tol.slater;
  cert.slack = best.value == 0.0 ? 0.0 : -best.value;
  if (cert.satisfied) cert.witness = best.x;

  const auto cloud = inst.cloud(Parameter::zero(system));
  const auto mn = min_norm_point(cloud.generators(true), inst.tol);
  cert.dual_check = mn.point.norm();
  cert.dual_satisfied = cert.dual_check > inst.tol.slater;
  cert.routes_agree = cert.dual_satisfied == cert.satisfied;
  if (!cert.routes_agree) {
    cert.diagnostic = cert.satisfied
                          ? "dual route finds (0,0) in the sampled hull although a strong Slater "
                            "point exists; the conjugate grid may be too coarse"
                          : "dual route separates (0,0) from the sampled hull but no strong Slater "
                            "point was found; possible sampling gap (closure points missing)";
  }
  return cert;
}

SlaterCertificate check_ssc(const Instance& inst, const Parameter& p) {
  if (p.norm() == 0.0) return check_ssc(inst);
  Instance shifted(inst.system.shifted(p.values));
  shifted.grids = inst.grids;
  shifted.tol = inst.tol;
  return check_ssc(shifted);
}

}  // namespace sipstab
