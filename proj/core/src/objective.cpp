#include <sipstab/error.hpp>
#include <sipstab/objective.hpp>

#include <algorithm>
#include <cmath>

namespace sipstab {

Objective Objective::quadratic(Matrix H, Vector g, double c) {
  if (H.rows() != H.cols() || H.rows() != g.size()) {
    throw ValidationError("objective: H must be square with the size of g");
  }
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H.cwiseAbs().maxCoeff())) {
    throw ValidationError("objective: H must be symmetric");
  }
  const auto size = g.size();
  return Objective(QuadraticObjective{std::move(H), std::move(g), c}, size);
}

Objective Objective::min_affine(std::vector<ObjectivePiece> pieces) {
  if (pieces.empty()) throw ValidationError("objective: min_affine needs at least one piece");
  const auto size = pieces.front().a.size();
  for (const auto& piece : pieces) {
    if (piece.a.size() != size) throw ValidationError("objective: pieces have different sizes");
  }
  return Objective(MinAffineObjective{std::move(pieces)}, size);
}

double Objective::value(const Vector& z) const {
  if (z.size() != size_) throw DimensionError("objective argument has the wrong size");
  if (const auto* q = std::get_if<QuadraticObjective>(&form_)) {
    return 0.5 * z.dot(q->H * z) + q->g.dot(z) + q->c;
  }
  double best = kInfinity;
  for (const auto& piece : std::get<MinAffineObjective>(form_).pieces) {
    best = std::min(best, piece.a.dot(z) + piece.b);
  }
  return best;
}

Vector Objective::gradient(const Vector& z) const {
  if (z.size() != size_) throw DimensionError("objective argument has the wrong size");
  const auto* q = std::get_if<QuadraticObjective>(&form_);
  if (q == nullptr) throw Error("min_affine objectives have no gradient; use upper_gradients");
  return q->H * z + q->g;
}

std::vector<Vector> Objective::upper_gradients(const Vector& z) const {
  if (is_smooth()) return {gradient(z)};
  const double v = value(z);
  const double tol = 1e-12 * (1.0 + std::abs(v));
  std::vector<Vector> out;
  for (const auto& piece : std::get<MinAffineObjective>(form_).pieces) {
    if (piece.a.dot(z) + piece.b <= v + tol) out.push_back(piece.a);
  }
  return out;
}

}  // namespace sipstab
