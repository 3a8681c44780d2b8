#include <sipstab/error.hpp>
#include <sipstab/format.hpp>
#include <sipstab/optimality.hpp>

#include <random>

namespace sipstab {

namespace {

void require_feasible(const Instance& inst, const Vector& xbar) {
  if (xbar.size() != inst.system.dimension()) throw DimensionError("reference point dimension mismatch");
  const double res = residual(inst.system, Parameter::zero(inst.system), xbar);
  if (res > inst.tol.feasibility) {
    throw InfeasibleError("reference point is not in F(0): residual " + format_double(res));
  }
}

void check_soundness(const Instance& inst, const Parameter& p, const ConsequenceQuery& query,
                     const Vector& anchor, const SoundnessOptions& options, ConsequenceResult* out) {
  const Eigen::Index n = inst.system.dimension();
  const double radius = 2.0 * (1.0 + anchor.lpNorm<Eigen::Infinity>());
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double slack = inst.tol.membership * (1.0 + std::abs(query.alpha));
  for (std::size_t k = 0; k < options.samples; ++k) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = anchor(i) + radius * unit(rng);
    const Vector y = distance_primal(inst.system, p, x, inst.tol).projection;
    ++out->soundness_samples;
    if (query.v.dot(y) > query.alpha + slack) ++out->soundness_violations;
  }
}

}  // namespace

ConsequenceResult farkas_consequence(const Instance& inst, const Parameter& p,
                                     const ConsequenceQuery& query, const SoundnessOptions& soundness) {
  const Eigen::Index n = inst.system.dimension();
  if (query.v.size() != n) throw DimensionError("query vector dimension mismatch");
  // Throws when F(p) is empty; the projection of 0 also anchors the soundness sample.
  const Vector anchor = distance_primal(inst.system, p, Vector::Zero(n), inst.tol).projection;

  const auto cloud = inst.cloud(p);
  const Matrix hull = cloud.generators(true);
  Matrix gens(n + 1, hull.cols() + 1);
  gens.leftCols(hull.cols()) = hull;
  gens.col(hull.cols()) = Vector::Unit(n + 1, n);
  Vector target(n + 1);
  target << query.v, query.alpha;

  const auto cd = cone_distance(gens, target, inst.tol);
  ConsequenceResult out;
  out.residual = cd.distance;
  out.weights = cd.weights;
  out.holds = cd.distance <= inst.tol.membership;
  if (out.holds) check_soundness(inst, p, query, anchor, soundness, &out);
  return out;
}

ConsequenceResult normal_cone_member(const Instance& inst, const Vector& xbar, const Vector& v,
                                     const SoundnessOptions& soundness) {
  require_feasible(inst, xbar);
  return farkas_consequence(inst, Parameter::zero(inst.system), {v, v.dot(xbar)}, soundness);
}

const char* to_string(StationarityStatus status) {
  switch (status) {
    case StationarityStatus::kSatisfied:
      return "satisfied";
    case StationarityStatus::kInconclusive:
      return "inconclusive";
    case StationarityStatus::kViolated:
      return "violated";
  }
  return "unknown";
}

StationarityCertificate check_stationarity_smooth(const Instance& inst, const Vector& xbar,
                                                  const Vector& grad_p, const Vector& grad_x) {
  require_feasible(inst, xbar);
  if (grad_p.size() != static_cast<Eigen::Index>(inst.system.size()) ||
      grad_x.size() != inst.system.dimension()) {
    throw DimensionError("objective gradient dimension mismatch");
  }
  Vector target(grad_p.size() + grad_x.size() + 1);
  target << -grad_p, -grad_x, -grad_x.dot(xbar);
  const auto cd = cone_distance(graph_normal_generators(inst, xbar), target, inst.tol);

  StationarityCertificate cert;
  cert.residual = cd.distance;
  cert.weights = cd.weights;
  cert.grad_p = grad_p;
  cert.grad_x = grad_x;
  if (cd.distance <= inst.tol.membership) {
    cert.status = StationarityStatus::kSatisfied;
  } else if (cd.distance <= inst.tol.inconclusive) {
    cert.status = StationarityStatus::kInconclusive;
  }
  cert.satisfied = cert.status == StationarityStatus::kSatisfied;
  return cert;
}

UpperStationarity check_stationarity_upper(const Instance& inst, const Vector& xbar,
                                           const std::vector<std::pair<Vector, Vector>>& upper) {
  require_feasible(inst, xbar);
  UpperStationarity out;
  out.vacuous = upper.empty();
  for (const auto& [gp, gx] : upper) {
    out.certificates.push_back(check_stationarity_smooth(inst, xbar, gp, gx));
    out.all_satisfied = out.all_satisfied && out.certificates.back().satisfied;
  }
  return out;
}

UpperStationarity check_stationarity(const Instance& inst, const Vector& xbar,
                                     const Objective& objective) {
  const auto m = static_cast<Eigen::Index>(inst.system.size());
  const Eigen::Index n = inst.system.dimension();
  if (objective.size() != m + n) {
    throw DimensionError("objective is declared over " + std::to_string(objective.size()) +
                         " variables, expected |T| + n = " + std::to_string(m + n));
  }
  Vector z = Vector::Zero(m + n);
  z.tail(n) = xbar;
  std::vector<std::pair<Vector, Vector>> upper;
  for (const auto& g : objective.upper_gradients(z)) upper.emplace_back(g.head(m), g.tail(n));
  return check_stationarity_upper(inst, xbar, upper);
}

}  // namespace sipstab
