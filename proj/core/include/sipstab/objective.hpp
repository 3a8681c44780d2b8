#pragma once

#include <sipstab/types.hpp>

#include <variant>
#include <vector>

namespace sipstab {

/// phi(z) = 1/2 z'Hz + g'z + c over z = (p, x).
struct QuadraticObjective {
  Matrix H;
  Vector g;
  double c = 0.0;
};

struct ObjectivePiece {
  Vector a;
  double b = 0.0;  // <a,z> + b
};

/// phi(z) = min_i (<a_i,z> + b_i), a concave function whose upper
/// subgradients at z are the active pieces.
struct MinAffineObjective {
  std::vector<ObjectivePiece> pieces;
};

/// An objective of the two-variable program min phi(p, x) s.t. x in F(p).
class Objective {
 public:
  using Form = std::variant<QuadraticObjective, MinAffineObjective>;

  /// Throws ValidationError on non-symmetric H or mismatched sizes.
  static Objective quadratic(Matrix H, Vector g, double c = 0.0);
  static Objective min_affine(std::vector<ObjectivePiece> pieces);

  const Form& form() const noexcept { return form_; }
  /// Length of z = |T| + n.
  Eigen::Index size() const noexcept { return size_; }
  bool is_smooth() const noexcept { return std::holds_alternative<QuadraticObjective>(form_); }

  double value(const Vector& z) const;
  /// Gradient of a quadratic objective; throws Error for min-affine forms.
  Vector gradient(const Vector& z) const;
  /// Upper subgradients at z: the gradient for a quadratic, the pieces
  /// active within 1e-12 (relative) for a min-affine form.
  std::vector<Vector> upper_gradients(const Vector& z) const;

 private:
  Objective(Form form, Eigen::Index size) : form_(std::move(form)), size_(size) {}

  Form form_;
  Eigen::Index size_;
};

}  // namespace sipstab
