#include <sipstab/charset.hpp>
#include <sipstab/error.hpp>
#include <sipstab/format.hpp>

#include <cmath>
#include <ostream>

namespace sipstab {

Matrix CharacteristicCloud::generators(bool include_closure) const {
  const std::size_t m = points.size() + (include_closure ? closure_points.size() : 0);
  Matrix g(dimension + 1, static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& pt = at(i);
    g.col(static_cast<Eigen::Index>(i)).head(dimension) = pt.u;
    g(dimension, static_cast<Eigen::Index>(i)) = pt.alpha;
  }
  return g;
}

const CloudPoint& CharacteristicCloud::at(std::size_t i) const {
  return i < points.size() ? points[i] : closure_points.at(i - points.size());
}

CharacteristicCloud build_characteristic(const InequalitySystem& system, const Parameter& p,
                                         const GridSet& grids) {
  if (p.values.size() != static_cast<Eigen::Index>(system.size())) {
    throw DimensionError("parameter size does not match the number of constraints");
  }
  const auto lin = linearize_system(system, grids);
  CharacteristicCloud cloud;
  cloud.dimension = system.dimension();
  cloud.points.reserve(lin.rows.size());
  for (const auto& row : lin.rows) {
    cloud.points.push_back({row.a, row.b + p.values(static_cast<Eigen::Index>(row.origin)), row.origin});
  }
  return cloud;
}

std::vector<CloudPoint> closure_points_from(const std::vector<Vector>& points, int dimension) {
  std::vector<CloudPoint> out;
  out.reserve(points.size());
  for (const auto& v : points) {
    if (v.size() != dimension + 1) {
      throw DimensionError("closure point must have dimension n+1 = " +
                           std::to_string(dimension + 1));
    }
    out.push_back({v.head(dimension), v(dimension), std::nullopt});
  }
  return out;
}

ActiveIndexSet active_indices(const InequalitySystem& system, const Vector& xbar, double epsilon,
                              double feasibility) {
  if (epsilon < 0.0) throw ValidationError("epsilon must be nonnegative");
  const auto zero = Parameter::zero(system);
  const double res = residual(system, zero, xbar);
  if (res > feasibility) {
    throw InfeasibleError("reference point violates sigma(0) by " + format_double(res));
  }
  ActiveIndexSet out{epsilon, {}};
  for (std::size_t t = 0; t < system.size(); ++t) {
    if (evaluate(system[t].function, xbar) >= -epsilon) out.indices.push_back(t);
  }
  return out;
}

CharacteristicCloud epsilon_active_cloud(const InequalitySystem& system, const Vector& xbar,
                                         double epsilon, const GridSet& grids,
                                         double feasibility) {
  const auto active = active_indices(system, xbar, epsilon, feasibility);
  auto full = build_characteristic(system, Parameter::zero(system), grids);
  CharacteristicCloud out;
  out.dimension = full.dimension;
  std::vector<bool> keep(system.size(), false);
  for (auto t : active.indices) keep[t] = true;
  for (auto& pt : full.points) {
    if (keep[*pt.origin]) out.points.push_back(std::move(pt));
  }
  return out;
}

void write_cloud_csv(std::ostream& out, const CharacteristicCloud& cloud,
                     const InequalitySystem& system) {
  out << "origin";
  for (int i = 0; i < cloud.dimension; ++i) out << ",u" << i + 1;
  out << ",alpha\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& pt = cloud.at(i);
    out << (pt.origin ? system[*pt.origin].label : std::string("closure"));
    for (Eigen::Index k = 0; k < pt.u.size(); ++k) out << ',' << format_double(pt.u(k));
    out << ',' << format_double(pt.alpha) << '\n';
  }
}

}  // namespace sipstab
