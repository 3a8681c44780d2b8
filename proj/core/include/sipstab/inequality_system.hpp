#pragma once

#include <sipstab/convex_function.hpp>
#include <sipstab/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sipstab {

struct Constraint {
  std::string label;
  ConvexFunction function;
};

/// Describes how a finite index set was cut out of an infinite family.
struct Truncation {
  std::string family;  // free text, e.g. "t = 1, 2, ..."
  int level = 0;       // truncation level N (or grid size)
};

/// sigma(p) = { f_t(x) <= p_t, t in T } over R^n with a finite index set T.
class InequalitySystem {
 public:
  /// Throws ValidationError when empty, when dimensions disagree, or when
  /// labels repeat.
  InequalitySystem(int dimension, std::vector<Constraint> constraints,
                   std::optional<Truncation> truncation = std::nullopt);

  int dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return constraints_.size(); }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const Constraint& operator[](std::size_t t) const { return constraints_[t]; }
  const std::optional<Truncation>& truncation() const noexcept { return truncation_; }

  bool is_linear() const noexcept;

  /// The system { f_t - p_t <= 0 }, i.e. sigma(p) renormalized to parameter 0.
  InequalitySystem shifted(const Vector& p) const;

  /// sup_t f_t(x).
  double max_value(const Vector& x) const;

 private:
  int dimension_;
  std::vector<Constraint> constraints_;
  std::optional<Truncation> truncation_;
};

/// Perturbation p in l_inf(T), one entry per index.
struct Parameter {
  Vector values;

  static Parameter zero(const InequalitySystem& system) {
    return {Vector::Zero(static_cast<Eigen::Index>(system.size()))};
  }
  double norm() const { return values.size() == 0 ? 0.0 : values.lpNorm<Eigen::Infinity>(); }
};

/// sup_t [f_t(x) - p_t]_+ : zero iff x in F(p); equals dist(p; F^{-1}(x))
/// in the sup-norm.
double residual(const InequalitySystem& system, const Parameter& p, const Vector& x);

}  // namespace sipstab
