#include "dense_lp.hpp"

#include <cmath>
#include <vector>

namespace sipstab::detail {
namespace {

class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b, double tol)
      : rows_(A.rows()), cols_(A.cols()), tol_(tol) {
    // Columns: original [0, cols_), artificial [cols_, cols_ + rows_), rhs last.
    t_ = Matrix::Zero(rows_ + 1, cols_ + rows_ + 1);
    basis_.resize(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(cols_) = sign * A.row(i);
      t_(i, cols_ + i) = 1.0;
      t_(i, rhs()) = sign * b(i);
      sign_.push_back(sign);
      basis_[i] = cols_ + i;
    }
  }

  Eigen::Index rhs() const { return cols_ + rows_; }

  // Loads objective row for minimizing cost'x over the current basis.
  void set_objective(const Vector& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double cb = t_(rows_, basis_[i]);
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
  }

  // Returns false when unbounded.
  bool optimize(Eigen::Index usable_cols) {
    for (int iter = 0; iter < 50000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < usable_cols; ++j) {
        if (t_(rows_, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (t_(i, enter) > tol_) {
          const double ratio = t_(i, rhs()) / t_(i, enter);
          if (leave < 0 || ratio < best - tol_ ||
              (std::abs(ratio - best) <= tol_ && basis_[i] < basis_[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[r] = c;
  }

  // Pivots remaining artificial variables out of the basis where possible.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
      // Otherwise the row is redundant; the artificial stays at zero.
    }
  }

  double objective_value() const { return -t_(rows_, rhs()); }

  // Artificial column i has zero cost, so its reduced cost is -duals(i) of
  // the sign-normalized row.
  Vector duals() const {
    Vector y(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) y(i) = -sign_[static_cast<std::size_t>(i)] * t_(rows_, cols_ + i);
    return y;
  }

  Vector solution() const {
    Vector x = Vector::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) x(basis_[i]) = t_(i, rhs());
    }
    return x;
  }

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  double tol_;
  Matrix t_;
  std::vector<Eigen::Index> basis_;
  std::vector<double> sign_;
};

}  // namespace

LpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& c,
                           double tol) {
  LpResult result;
  Tableau tab(A, b, tol);

  Vector phase1 = Vector::Zero(A.cols() + A.rows());
  phase1.tail(A.rows()).setOnes();
  tab.set_objective(phase1);
  tab.optimize(A.cols() + A.rows());
  if (tab.objective_value() > tol * (1.0 + b.lpNorm<Eigen::Infinity>()) * 10.0) {
    result.status = LpStatus::kInfeasible;
    return result;
  }
  tab.expel_artificials();

  Vector phase2 = Vector::Zero(A.cols() + A.rows());
  phase2.head(A.cols()) = c;
  tab.set_objective(phase2);
  if (!tab.optimize(A.cols())) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x = tab.solution();
  result.duals = tab.duals();
  result.value = c.dot(result.x);
  return result;
}

}  // namespace sipstab::detail
