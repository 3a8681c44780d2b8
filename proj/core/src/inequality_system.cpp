#include <sipstab/error.hpp>
#include <sipstab/inequality_system.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace sipstab {

InequalitySystem::InequalitySystem(int dimension, std::vector<Constraint> constraints,
                                   std::optional<Truncation> truncation)
    : dimension_(dimension),
      constraints_(std::move(constraints)),
      truncation_(std::move(truncation)) {
  if (dimension_ < 1) throw ValidationError("system dimension must be positive");
  if (constraints_.empty()) throw ValidationError("system needs at least one constraint");
  std::set<std::string> labels;
  for (const auto& c : constraints_) {
    if (c.function.dimension() != dimension_) {
      throw ValidationError("constraint '" + c.label + "' has dimension " +
                            std::to_string(c.function.dimension()) + ", system has " +
                            std::to_string(dimension_));
    }
    if (!labels.insert(c.label).second) {
      throw ValidationError("duplicate constraint label '" + c.label + "'");
    }
  }
}

bool InequalitySystem::is_linear() const noexcept {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [](const Constraint& c) { return c.function.is_polyhedral(); });
}

InequalitySystem InequalitySystem::shifted(const Vector& p) const {
  if (p.size() != static_cast<Eigen::Index>(size())) {
    throw DimensionError("parameter has " + std::to_string(p.size()) + " entries, system has " +
                         std::to_string(size()) + " constraints");
  }
  std::vector<Constraint> out;
  out.reserve(size());
  for (std::size_t t = 0; t < size(); ++t) {
    out.push_back({constraints_[t].label, constraints_[t].function.shifted(p(t))});
  }
  return InequalitySystem(dimension_, std::move(out), truncation_);
}

double InequalitySystem::max_value(const Vector& x) const {
  double best = -kInfinity;
  for (const auto& c : constraints_) best = std::max(best, evaluate(c.function, x));
  return best;
}

double residual(const InequalitySystem& system, const Parameter& p, const Vector& x) {
  if (p.values.size() != static_cast<Eigen::Index>(system.size())) {
    throw DimensionError("parameter size does not match the number of constraints");
  }
  if (x.size() != system.dimension()) throw DimensionError("point dimension mismatch");
  double worst = 0.0;
  for (std::size_t t = 0; t < system.size(); ++t) {
    worst = std::max(worst, evaluate(system[t].function, x) - p.values(t));
  }
  return worst;
}

}  // namespace sipstab
