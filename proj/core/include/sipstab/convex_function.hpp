#pragma once

#include <sipstab/types.hpp>

#include <cstddef>
#include <variant>
#include <vector>

namespace sipstab {

/// f(x) = <a,x> - b
struct Affine {
  Vector a;
  double b = 0.0;
};

/// f(x) = 1/2 <x,Qx> + <c,x> + d with Q symmetric positive semidefinite.
struct Quadratic {
  Matrix Q;
  Vector c;
  double d = 0.0;
};

struct AffinePiece {
  Vector a;
  double b = 0.0;
};

/// f(x) = max_i (<a_i,x> - b_i)
struct MaxAffine {
  std::vector<AffinePiece> pieces;
};

/// A validated convex constraint function: one of the three closed forms
/// whose Fenchel conjugate is computable exactly.
class ConvexFunction {
 public:
  using Form = std::variant<Affine, Quadratic, MaxAffine>;

  static ConvexFunction affine(Vector a, double b);
  /// Throws ValidationError unless Q is symmetric within 1e-12 and its
  /// eigenvalues are >= -1e-10.
  static ConvexFunction quadratic(Matrix Q, Vector c, double d);
  /// Throws ValidationError on an empty piece list or mixed dimensions.
  static ConvexFunction max_affine(std::vector<AffinePiece> pieces);

  int dimension() const noexcept { return dimension_; }
  const Form& form() const noexcept { return form_; }

  bool is_affine() const noexcept { return std::holds_alternative<Affine>(form_); }
  bool is_polyhedral() const noexcept {
    return !std::holds_alternative<Quadratic>(form_);
  }

  /// Returns f - shift, i.e. the constraint f(x) <= p rewritten as
  /// (f - p)(x) <= 0.
  ConvexFunction shifted(double shift) const;

  // Spectral data of a quadratic (empty for the other forms).
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
  const Vector& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  explicit ConvexFunction(Form form);

  Form form_;
  int dimension_ = 0;
  Matrix eigenvectors_;
  Vector eigenvalues_;
};

double evaluate(const ConvexFunction& f, const Vector& x);

/// An element of the subdifferential at x. At kinks of a max-affine function
/// the lowest-index maximal piece is returned.
Vector subgradient(const ConvexFunction& f, const Vector& x);

/// f*(u) = sup_x <u,x> - f(x); returns kInfinity outside dom f*.
double conjugate_value(const ConvexFunction& f, const Vector& u);

/// Tensor grid on a box plus optional extra sample points ("anchors").
struct SampleGrid {
  double lower = -5.0;
  double upper = 5.0;
  int points_per_axis = 21;
  std::vector<Vector> anchors;

  bool empty() const noexcept { return points_per_axis <= 0 && anchors.empty(); }
  /// Materializes the grid in dimension n (row-major over axes).
  std::vector<Vector> points(int n) const;
};

struct GraphPoint {
  Vector u;
  double beta = 0.0;
};

/// Samples gph f*: for each grid point x, (u, <u,x> - f(x)) with u the
/// subgradient at x. Affine forms give {(a,b)}; max-affine forms give their
/// exposed pieces. Duplicates (within 1e-12) are removed, first-seen order kept.
std::vector<GraphPoint> conjugate_graph_sample(const ConvexFunction& f,
                                               const SampleGrid& grid);

}  // namespace sipstab
