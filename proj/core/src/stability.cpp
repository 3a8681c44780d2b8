#include <sipstab/error.hpp>
#include <sipstab/format.hpp>
#include <sipstab/stability.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace sipstab {

CharacteristicCloud Instance::cloud(const Parameter& p) const { return cloud(p, grids); }

CharacteristicCloud Instance::cloud(const Parameter& p, const GridSet& custom_grids) const {
  auto out = build_characteristic(system, p, custom_grids);
  if (p.norm() == 0.0) out.closure_points = closure_points;
  return out;
}

namespace {

void require_feasible(const Instance& inst, const Vector& xbar) {
  if (xbar.size() != inst.system.dimension()) throw DimensionError("reference point dimension mismatch");
  const double res = residual(inst.system, Parameter::zero(inst.system), xbar);
  if (res > inst.tol.feasibility) {
    throw InfeasibleError("reference point is not in F(0): residual " + format_double(res));
  }
}

void require_ssc(const Instance& inst) {
  if (!check_ssc(inst).satisfied) {
    throw PrerequisiteError("sigma(0) does not satisfy the strong Slater condition");
  }
}

bool is_strong_slater_point(const Instance& inst, const Vector& xbar) {
  return inst.system.max_value(xbar) < -inst.tol.slater;
}

double reciprocal_norm(const Vector& u) {
  const double n = u.norm();
  if (n == 0.0) {
    throw PrerequisiteError("(0,0) lies in the characteristic hull; the strong Slater condition fails");
  }
  return 1.0 / n;
}

// splitmix64 finalizer, used to derive one independent stream per sample.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

DualDistance distance_dual(const Instance& inst, const Parameter& p, const Vector& x) {
  if (x.size() != inst.system.dimension()) throw DimensionError("point dimension mismatch");
  if (!check_ssc(inst, p).satisfied) {
    throw PrerequisiteError("sigma(p) does not satisfy the strong Slater condition");
  }
  const auto cloud = inst.cloud(p);
  const auto fs = fractional_sup(cloud, x, inst.tol);

  DualDistance out;
  out.value = fs.value;
  out.finite = fs.finite;
  out.u = fs.u;
  out.alpha = fs.alpha;
  out.projection = x;
  if (fs.finite && fs.value > 0.0) out.projection = x - fs.value * fs.u / fs.u.norm();
  if (fs.finite) out.gap = distance_primal(inst.system, p, out.projection, inst.tol).value;
  else out.gap = kInfinity;

  const auto lin = linearize_system(inst.system, inst.grids);
  out.residual_gap = linearization_gap(inst.system, lin, p, {x, out.projection});
  return out;
}

const char* to_string(ModulusMode mode) {
  switch (mode) {
    case ModulusMode::kSlaterPointZero:
      return "slater-point-zero";
    case ModulusMode::kEmptyIntersectionZero:
      return "empty-intersection-zero";
    case ModulusMode::kComputed:
      return "computed";
  }
  return "unknown";
}

std::vector<double> default_epsilon_schedule() { return {1.0, 0.5, 0.1, 0.01, 0.0}; }

ModulusCertificate lip_bound(const Instance& inst, const Vector& xbar,
                             const std::vector<double>& epsilon_schedule) {
  require_feasible(inst, xbar);
  require_ssc(inst);

  const auto grids = with_anchor(inst.grids, xbar);
  const auto cloud = inst.cloud(Parameter::zero(inst.system), grids);
  ModulusCertificate cert;
  cert.cloud_size = cloud.size();
  cert.attained = true;

  if (is_strong_slater_point(inst, xbar)) {
    cert.mode = ModulusMode::kSlaterPointZero;
  } else if (auto sol = constrained_min_norm(cloud, xbar, SliceSide::kGraph, inst.tol)) {
    cert.mode = ModulusMode::kComputed;
    cert.lip_value = reciprocal_norm(sol->u);
    cert.alpha = sol->alpha;
    cert.argmin = sol->u;
    cert.weights = sol->weights;
    // Weight on a declared closure point means the bound is reached only in the closure.
    cert.attained = std::none_of(cert.weights.support.begin(), cert.weights.support.end(),
                                 [&](std::size_t i) { return i >= cloud.points.size(); });
  } else {
    cert.mode = ModulusMode::kEmptyIntersectionZero;
  }

  for (double eps : epsilon_schedule) {
    EpsilonDiagnostic d;
    d.epsilon = eps;
    d.active_indices = active_indices(inst.system, xbar, eps, inst.tol.feasibility).indices.size();
    const auto sub = epsilon_active_cloud(inst.system, xbar, eps, grids, inst.tol.feasibility);
    if (sub.size() > 0) {
      if (auto sol = constrained_min_norm(sub, xbar, SliceSide::kGraph, inst.tol)) {
        d.value = reciprocal_norm(sol->u);
      }
    }
    cert.epsilon_diagnostics.push_back(d);
  }
  return cert;
}

CoderivativeNorm coderivative_norm(const Instance& inst, const Vector& xbar) {
  require_feasible(inst, xbar);
  require_ssc(inst);
  CoderivativeNorm out;
  if (is_strong_slater_point(inst, xbar)) return out;
  const auto cloud = inst.cloud(Parameter::zero(inst.system), with_anchor(inst.grids, xbar));
  if (auto sol = constrained_min_norm(cloud, xbar, SliceSide::kEpigraph, inst.tol)) {
    out.value = reciprocal_norm(sol->u);
    out.argmin = sol->u;
  }
  return out;
}

Matrix graph_normal_generators(const Instance& inst, const Vector& xbar) {
  const auto m = static_cast<Eigen::Index>(inst.system.size());
  const Eigen::Index n = inst.system.dimension();
  const auto cloud = inst.cloud(Parameter::zero(inst.system), with_anchor(inst.grids, xbar));
  Matrix gens = Matrix::Zero(m + n + 1, static_cast<Eigen::Index>(cloud.points.size()));
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const auto& pt = cloud.points[i];
    const auto col = static_cast<Eigen::Index>(i);
    gens(static_cast<Eigen::Index>(*pt.origin), col) = -1.0;
    gens.col(col).segment(m, n) = pt.u;
    gens(m + n, col) = pt.alpha;
  }
  return gens;
}

ConeMembership coderivative_member(const Instance& inst, const Vector& xbar, const Vector& p_star,
                                   const Vector& x_star) {
  require_feasible(inst, xbar);
  if (p_star.size() != static_cast<Eigen::Index>(inst.system.size()) ||
      x_star.size() != inst.system.dimension()) {
    throw DimensionError("(p*, x*) dimension mismatch");
  }
  Vector target(p_star.size() + x_star.size() + 1);
  target << p_star, -x_star, -x_star.dot(xbar);
  const auto cd = cone_distance(graph_normal_generators(inst, xbar), target, inst.tol);
  return {cd.distance <= inst.tol.membership, cd.distance, cd.weights};
}

std::vector<TrendRow> lip_sample(const Instance& inst, const Vector& xbar, const SampleOptions& options) {
  require_feasible(inst, xbar);
  require_ssc(inst);
  const auto m = static_cast<Eigen::Index>(inst.system.size());
  const Eigen::Index n = inst.system.dimension();
  const std::size_t count = options.samples_per_radius;
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(options.threads, count)));

  std::vector<TrendRow> rows;
  for (std::size_t ri = 0; ri < options.radii.size(); ++ri) {
    const double r = options.radii[ri];
    if (!(r > 0.0)) throw ValidationError("sampling radii must be positive");

    auto run = [&](std::size_t begin, std::size_t end, TrendRow* acc) {
      for (std::size_t j = begin; j < end; ++j) {
        std::mt19937_64 rng(mix(mix(options.seed) ^ mix(ri + 1) ^ mix((j + 1) << 20)));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::normal_distribution<double> normal;
        Parameter p{Vector(m)};
        for (Eigen::Index t = 0; t < m; ++t) p.values(t) = r * unit(rng);
        Vector dir(n);
        for (Eigen::Index i = 0; i < n; ++i) dir(i) = normal(rng);
        const double len = r * std::pow(0.5 * (unit(rng) + 1.0), 1.0 / static_cast<double>(n));
        const double dn = dir.norm();
        const Vector x = xbar + (dn > 0.0 ? Vector(dir * (len / dn)) : Vector::Zero(n));

        auto q = quotient_sample(inst.system, p, x, inst.tol);
        if (q.denominator <= 1e-12) continue;  // x in F(p), ratio 0
        ++acc->violated;
        if (std::isinf(q.ratio)) {
          ++acc->infinite;
        } else {
          acc->max_ratio = std::max(acc->max_ratio, q.ratio);
        }
      }
    };

    std::vector<TrendRow> partial(workers);
    if (workers == 1) {
      run(0, count, &partial[0]);
    } else {
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
          try {
            run(begin, end, &partial[w]);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    TrendRow row;
    row.radius = r;
    row.samples = count;
    for (const auto& part : partial) {
      row.max_ratio = std::max(row.max_ratio, part.max_ratio);
      row.violated += part.violated;
      row.infinite += part.infinite;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sipstab
