#include <sipstab/convex_function.hpp>
#include <sipstab/error.hpp>

#include "dense_lp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>
#include <string>

namespace sipstab {
namespace {

void require_dimension(const ConvexFunction& f, const Vector& v, const char* what) {
  if (v.size() != f.dimension()) {
    throw DimensionError(std::string(what) + " has dimension " +
                         std::to_string(v.size()) + ", function expects " +
                         std::to_string(f.dimension()));
  }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Eigenvalues below this are treated as zero in pseudo-inverse computations.
double spectral_floor(const Vector& eigenvalues) {
  const double top = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return 1e-12 * std::max(1.0, top);
}

double max_affine_conjugate(const MaxAffine& f, const Vector& u) {
  const auto m = static_cast<Eigen::Index>(f.pieces.size());
  const Eigen::Index n = u.size();
  Matrix A(n + 1, m);
  Vector cost(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A.col(i).head(n) = f.pieces[i].a;
    A(n, i) = 1.0;
    cost(i) = f.pieces[i].b;
  }
  Vector rhs(n + 1);
  rhs.head(n) = u;
  rhs(n) = 1.0;
  const auto lp = detail::solve_standard_lp(A, rhs, cost);
  if (lp.status != detail::LpStatus::kOptimal) return kInfinity;
  return lp.value;
}

}  // namespace

ConvexFunction::ConvexFunction(Form form) : form_(std::move(form)) {}

ConvexFunction ConvexFunction::affine(Vector a, double b) {
  if (a.size() == 0) throw ValidationError("affine function needs a nonempty coefficient vector");
  if (!a.allFinite() || !std::isfinite(b)) throw ValidationError("affine coefficients must be finite");
  ConvexFunction f(Affine{std::move(a), b});
  f.dimension_ = static_cast<int>(std::get<Affine>(f.form_).a.size());
  return f;
}

ConvexFunction ConvexFunction::quadratic(Matrix Q, Vector c, double d) {
  if (Q.rows() == 0 || Q.rows() != Q.cols()) {
    throw ValidationError("quadratic form needs a nonempty square matrix");
  }
  if (c.size() != Q.rows()) {
    throw ValidationError("quadratic linear term has dimension " + std::to_string(c.size()) +
                          ", matrix is " + std::to_string(Q.rows()) + "x" +
                          std::to_string(Q.cols()));
  }
  if (!Q.allFinite() || !c.allFinite() || !std::isfinite(d)) {
    throw ValidationError("quadratic coefficients must be finite");
  }
  if (max_abs(Q - Q.transpose()) > 1e-12 * std::max(1.0, max_abs(Q))) {
    throw ValidationError("quadratic matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (Q + Q.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("quadratic matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
  ConvexFunction f(Quadratic{sym, std::move(c), d});
  f.dimension_ = static_cast<int>(sym.rows());
  f.eigenvectors_ = eig.eigenvectors();
  f.eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
  return f;
}

ConvexFunction ConvexFunction::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw ValidationError("max-affine function needs at least one piece");
  const auto n = pieces.front().a.size();
  if (n == 0) throw ValidationError("max-affine piece has an empty coefficient vector");
  for (const auto& piece : pieces) {
    if (piece.a.size() != n) throw ValidationError("max-affine pieces have mixed dimensions");
    if (!piece.a.allFinite() || !std::isfinite(piece.b)) {
      throw ValidationError("max-affine coefficients must be finite");
    }
  }
  ConvexFunction f(MaxAffine{std::move(pieces)});
  f.dimension_ = static_cast<int>(n);
  return f;
}

ConvexFunction ConvexFunction::shifted(double shift) const {
  ConvexFunction out = *this;
  if (auto* aff = std::get_if<Affine>(&out.form_)) {
    aff->b += shift;
  } else if (auto* quad = std::get_if<Quadratic>(&out.form_)) {
    quad->d -= shift;
  } else {
    for (auto& piece : std::get<MaxAffine>(out.form_).pieces) piece.b += shift;
  }
  return out;
}

double evaluate(const ConvexFunction& f, const Vector& x) {
  require_dimension(f, x, "point");
  if (const auto* aff = std::get_if<Affine>(&f.form())) {
    return aff->a.dot(x) - aff->b;
  }
  if (const auto* quad = std::get_if<Quadratic>(&f.form())) {
    return 0.5 * x.dot(quad->Q * x) + quad->c.dot(x) + quad->d;
  }
  double best = -kInfinity;
  for (const auto& piece : std::get<MaxAffine>(f.form()).pieces) {
    best = std::max(best, piece.a.dot(x) - piece.b);
  }
  return best;
}

Vector subgradient(const ConvexFunction& f, const Vector& x) {
  require_dimension(f, x, "point");
  if (const auto* aff = std::get_if<Affine>(&f.form())) return aff->a;
  if (const auto* quad = std::get_if<Quadratic>(&f.form())) return quad->Q * x + quad->c;

  const auto& pieces = std::get<MaxAffine>(f.form()).pieces;
  const double top = evaluate(f, x);
  const double slack = 1e-12 * (1.0 + std::abs(top));
  for (const auto& piece : pieces) {
    if (piece.a.dot(x) - piece.b >= top - slack) return piece.a;
  }
  return pieces.front().a;  // unreachable: some piece attains the max
}

double conjugate_value(const ConvexFunction& f, const Vector& u) {
  require_dimension(f, u, "dual point");
  if (const auto* aff = std::get_if<Affine>(&f.form())) {
    return (u - aff->a).lpNorm<Eigen::Infinity>() <= 1e-10 ? aff->b : kInfinity;
  }
  if (const auto* quad = std::get_if<Quadratic>(&f.form())) {
    const Vector shifted = u - quad->c;
    const Vector coords = f.eigenvectors().transpose() * shifted;
    const Vector& lam = f.eigenvalues();
    const double floor = spectral_floor(lam);
    double quad_part = 0.0;
    double off_range = 0.0;
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
      if (lam(i) > floor) {
        quad_part += coords(i) * coords(i) / lam(i);
      } else {
        off_range += coords(i) * coords(i);
      }
    }
    if (std::sqrt(off_range) > 1e-8 * shifted.norm()) return kInfinity;
    return 0.5 * quad_part - quad->d;
  }
  return max_affine_conjugate(std::get<MaxAffine>(f.form()), u);
}

std::vector<Vector> SampleGrid::points(int n) const {
  std::vector<Vector> out;
  if (points_per_axis > 0 && n > 0) {
    std::vector<double> axis(static_cast<std::size_t>(points_per_axis));
    for (int k = 0; k < points_per_axis; ++k) {
      axis[k] = points_per_axis == 1
                    ? 0.5 * (lower + upper)
                    : lower + (upper - lower) * k / (points_per_axis - 1);
    }
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= axis.size();
    out.reserve(total + anchors.size());
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < total; ++k) {
      Vector x(n);
      for (int d = 0; d < n; ++d) x(d) = axis[idx[d]];
      out.push_back(std::move(x));
      for (int d = n - 1; d >= 0; --d) {
        if (++idx[d] < points_per_axis) break;
        idx[d] = 0;
      }
    }
  }
  for (const auto& anchor : anchors) {
    if (anchor.size() == n) out.push_back(anchor);
  }
  return out;
}

std::vector<GraphPoint> conjugate_graph_sample(const ConvexFunction& f,
                                               const SampleGrid& grid) {
  std::vector<GraphPoint> out;
  if (const auto* aff = std::get_if<Affine>(&f.form())) {
    out.push_back({aff->a, aff->b});
    return out;
  }

  std::set<std::vector<long long>> seen;
  auto push_unique = [&](Vector u, double beta) {
    std::vector<long long> key(static_cast<std::size_t>(u.size()) + 1);
    for (Eigen::Index i = 0; i < u.size(); ++i) key[i] = std::llround(u(i) * 1e12);
    key.back() = std::llround(beta * 1e12);
    if (seen.insert(std::move(key)).second) out.push_back({std::move(u), beta});
  };

  if (const auto* max = std::get_if<MaxAffine>(&f.form())) {
    for (const auto& piece : max->pieces) {
      if (conjugate_value(f, piece.a) >= piece.b - 1e-10 * (1.0 + std::abs(piece.b))) {
        push_unique(piece.a, piece.b);
      }
    }
    return out;
  }

  for (const auto& x : grid.points(f.dimension())) {
    Vector u = subgradient(f, x);
    const double beta = u.dot(x) - evaluate(f, x);
    push_unique(std::move(u), beta);
  }
  return out;
}

}  // namespace sipstab
