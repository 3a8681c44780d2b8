#include <sipstab/error.hpp>
#include <sipstab/linearize.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sipstab {

GridSet uniform_grids(const InequalitySystem& system, const SampleGrid& grid) {
  return GridSet(system.size(), grid);
}

GridSet with_anchor(GridSet grids, const Vector& x) {
  for (auto& g : grids) g.anchors.push_back(x);
  return grids;
}

LinearSystem linearize_system(const InequalitySystem& system, const GridSet& grids) {
  if (grids.size() != system.size()) {
    throw ValidationError("expected " + std::to_string(system.size()) + " grids, got " +
                          std::to_string(grids.size()));
  }
  LinearSystem lin;
  lin.dimension = system.dimension();
  for (std::size_t t = 0; t < system.size(); ++t) {
    if (grids[t].empty()) {
      throw ValidationError("empty sampling grid for constraint '" + system[t].label + "'");
    }
    for (auto& gp : conjugate_graph_sample(system[t].function, grids[t])) {
      lin.rows.push_back({std::move(gp.u), gp.beta, t});
    }
  }
  return lin;
}

EmbeddedParameter embed_parameter(const Parameter& p, const LinearSystem& lin) {
  EmbeddedParameter rho;
  rho.values.resize(static_cast<Eigen::Index>(lin.rows.size()));
  for (std::size_t r = 0; r < lin.rows.size(); ++r) {
    const auto t = lin.rows[r].origin;
    if (static_cast<Eigen::Index>(t) >= p.values.size()) {
      throw DimensionError("parameter does not cover row origin " + std::to_string(t));
    }
    rho.values(static_cast<Eigen::Index>(r)) = p.values(static_cast<Eigen::Index>(t));
  }
  return rho;
}

double linear_residual(const LinearSystem& lin, const EmbeddedParameter& rho, const Vector& x) {
  double worst = 0.0;
  for (std::size_t r = 0; r < lin.rows.size(); ++r) {
    const auto& row = lin.rows[r];
    worst = std::max(worst, row.a.dot(x) - row.b - rho.values(static_cast<Eigen::Index>(r)));
  }
  return worst;
}

double linearization_gap(const InequalitySystem& system, const LinearSystem& lin,
                         const Parameter& p, const std::vector<Vector>& probes) {
  const auto rho = embed_parameter(p, lin);
  double gap = 0.0;
  for (const auto& x : probes) {
    gap = std::max(gap, residual(system, p, x) - linear_residual(lin, rho, x));
  }
  return gap;
}

}  // namespace sipstab
