#include "cli.hpp"

#include <sipstab/builtins.hpp>
#include <sipstab/error.hpp>
#include <sipstab/report.hpp>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace sipstab::cli {
namespace {

// Shortest decimal string that reads back to the same double.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string num(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += num(v(i));
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Settings {
  std::string builtin;
  std::string scenario;
  int N = 10;
  int M = 10;
  bool with_closure = false;
  int grid_points = 21;
  std::uint64_t seed = 0;
  std::vector<double> eps_schedule;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
  bool pretty = false;
  bool timings = false;
  std::size_t probe = 0;
  Tolerances tol;

  std::vector<double> x, p, p_star, x_star, v, grad_p, grad_x, radii;
  double alpha = 0.0;
  std::size_t samples = 0;
};

struct Flags {
  CLI::Option* grid_points = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* eps = nullptr;
  std::map<std::string, CLI::Option*> tol;
};

void add_common(CLI::App* sub, Settings& s, Flags& f) {
  auto* b = sub->add_option("--builtin", s.builtin, "Built-in scenario name (see list-builtins)");
  auto* sc = sub->add_option("--scenario", s.scenario, "Scenario YAML file");
  b->excludes(sc);
  sub->add_option("--N", s.N, "Truncation level of example1_countable")->check(CLI::PositiveNumber);
  sub->add_option("--M", s.M, "Number of indices of example2_unbounded")->check(CLI::PositiveNumber);
  sub->add_flag("--with-closure", s.with_closure, "Declare the closure family of example1_countable");
  f.grid_points = sub->add_option("--grid-points", s.grid_points, "Conjugate grid points per axis")
                      ->check(CLI::Range(1, 100000));
  f.seed = sub->add_option("--seed", s.seed, "Random seed");
  f.eps = sub->add_option("--eps-schedule", s.eps_schedule, "Comma-separated epsilon schedule")
              ->delimiter(',')
              ->check(CLI::NonNegativeNumber);
  f.threads = sub->add_option("--threads", s.threads, "Sampling threads")->check(CLI::Range(1, 256));
  sub->add_option("--probe", s.probe, "Probe index in the scenario");
  sub->add_flag("--pretty", s.pretty, "Human-readable output");
  sub->add_option("--out", s.out, "Output path (run: file or CSV directory)");
  for (const auto& [name, field] :
       {std::pair{"feasibility", &s.tol.feasibility}, std::pair{"optimality", &s.tol.optimality},
        std::pair{"membership", &s.tol.membership}, std::pair{"inconclusive", &s.tol.inconclusive},
        std::pair{"projection", &s.tol.projection}, std::pair{"slater", &s.tol.slater}}) {
    f.tol[name] = sub->add_option(std::string("--tol-") + name, *field, std::string(name) + " tolerance")
                      ->check(CLI::PositiveNumber);
  }
}

// Defaults from the file named by SIPSTAB_CONFIG, applied before flags.
void apply_config(Scenario& scen, Settings& s, const Flags& f) {
  const char* path = std::getenv(kConfigEnv);
  if (path == nullptr || *path == '\0') return;
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string(kConfigEnv) + " file '" + path + "': " + e.what());
  }
  if (!root.IsMap()) throw ValidationError(std::string(kConfigEnv) + " file must be a mapping");
  try {
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (key == "threads") {
        if (f.threads->count() == 0) s.threads = kv.second.as<unsigned>();
      } else if (key == "grid_points") {
        if (f.grid_points->count() == 0) scen.grid.points_per_axis = kv.second.as<int>();
      } else if (key == "seed") {
        if (f.seed->count() == 0) scen.seed = kv.second.as<std::uint64_t>();
      } else if (key == "tolerances") {
        for (const auto& t : kv.second) {
          const auto name = t.first.as<std::string>();
          const auto it = f.tol.find(name);
          if (it == f.tol.end()) throw ValidationError("unknown tolerance '" + name + "' in config");
          if (it->second->count() > 0) continue;
          const double v = t.second.as<double>();
          if (name == "feasibility") scen.tol.feasibility = v;
          if (name == "optimality") scen.tol.optimality = v;
          if (name == "membership") scen.tol.membership = v;
          if (name == "inconclusive") scen.tol.inconclusive = v;
          if (name == "projection") scen.tol.projection = v;
          if (name == "slater") scen.tol.slater = v;
        }
      } else {
        throw ValidationError("unknown key '" + key + "' in config file '" + path + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config file '") + path + "': " + e.what());
  }
}

Scenario load(Settings& s, const Flags& f) {
  if (s.builtin.empty() == s.scenario.empty()) {
    throw ValidationError("exactly one of --builtin or --scenario is required");
  }
  Scenario scen = s.builtin.empty()
                      ? load_scenario(s.scenario)
                      : make_builtin(s.builtin, BuiltinOptions{s.N, s.M, s.with_closure});
  apply_config(scen, s, f);
  if (f.grid_points->count() > 0) scen.grid.points_per_axis = s.grid_points;
  if (f.seed->count() > 0) scen.seed = s.seed;
  if (f.eps->count() > 0) scen.epsilon_schedule = s.eps_schedule;
  if (f.tol.at("feasibility")->count() > 0) scen.tol.feasibility = s.tol.feasibility;
  if (f.tol.at("optimality")->count() > 0) scen.tol.optimality = s.tol.optimality;
  if (f.tol.at("membership")->count() > 0) scen.tol.membership = s.tol.membership;
  if (f.tol.at("inconclusive")->count() > 0) scen.tol.inconclusive = s.tol.inconclusive;
  if (f.tol.at("projection")->count() > 0) scen.tol.projection = s.tol.projection;
  if (f.tol.at("slater")->count() > 0) scen.tol.slater = s.tol.slater;
  return scen;
}

const Probe& probe_of(const Scenario& scen, const Settings& s) {
  if (s.probe >= scen.probes.size()) {
    throw ValidationError("scenario '" + scen.name + "' has " + std::to_string(scen.probes.size()) +
                          " probe(s); --probe " + std::to_string(s.probe) + " is out of range");
  }
  return scen.probes[s.probe];
}

Vector probe_point(const Scenario& scen, const Settings& s) { return probe_of(scen, s).point; }

Parameter probe_parameter(const Scenario& scen, const Settings& s) {
  if (!s.p.empty()) {
    if (s.p.size() != scen.system.size()) {
      throw ValidationError("--p needs " + std::to_string(scen.system.size()) + " entries");
    }
    return {to_vector(s.p)};
  }
  if (scen.probes.empty()) return Parameter::zero(scen.system);
  return scen.parameter(probe_of(scen, s));
}

// ---------------------------------------------------------------------------

int cmd_check_ssc(const Scenario& scen, const Settings& s, std::ostream& out, std::ostream& err) {
  const auto cert = check_ssc(scen.instance());
  out << "SSC: " << (cert.satisfied ? "satisfied" : "NOT satisfied") << "\n";
  if (s.pretty) {
    out << "  witness       " << (cert.witness ? num(*cert.witness) : "-") << "\n"
        << "  slack         " << num(cert.slack) << "\n"
        << "  search radius " << num(cert.search_radius) << "\n"
        << "  dual check    " << num(cert.dual_check) << "\n"
        << "  routes agree  " << (cert.routes_agree ? "yes" : "no") << "\n";
  } else {
    if (cert.witness) out << "witness " << num(*cert.witness) << "\n";
    out << "slack " << num(cert.slack) << "\n"
        << "dual_check " << num(cert.dual_check) << "\n"
        << "routes_agree " << (cert.routes_agree ? "true" : "false") << "\n";
  }
  if (!cert.diagnostic.empty()) err << "warning: " << cert.diagnostic << "\n";
  return kOk;
}

int cmd_distance(const Scenario& scen, const Settings& s, std::ostream& out) {
  const auto inst = scen.instance();
  const auto p = probe_parameter(scen, s);
  std::vector<Vector> points;
  if (!s.x.empty()) {
    points.push_back(to_vector(s.x));
  } else {
    points = probe_of(scen, s).distance_points;
  }
  if (points.empty()) throw ValidationError("no distance points: pass --x or add distance_points to the probe");
  if (s.pretty) out << std::left << std::setw(24) << "point" << std::setw(24) << "dual" << std::setw(24) << "primal" << "gap\n";
  for (const auto& x : points) {
    if (x.size() != scen.system.dimension()) throw ValidationError("--x has the wrong dimension");
    const auto dual = distance_dual(inst, p, x);
    const auto primal = distance_primal(scen.system, p, x, scen.tol);
    if (s.pretty) {
      out << std::setw(24) << num(x) << std::setw(24) << num(dual.value) << std::setw(24) << num(primal.value)
          << num(dual.gap) << "\n";
    } else {
      out << num(dual.value) << " " << num(primal.value) << " " << num(dual.gap) << "\n";
    }
  }
  return kOk;
}

int cmd_lip_bound(const Scenario& scen, const Settings& s, std::ostream& out) {
  const auto cert = lip_bound(scen.instance(), probe_point(scen, s), scen.epsilon_schedule);
  if (!s.pretty) {
    out << num(cert.lip_value) << "\n";
    return kOk;
  }
  out << "lip        " << num(cert.lip_value) << "\n"
      << "mode       " << to_string(cert.mode) << "\n"
      << "attained   " << (cert.attained ? "yes" : "no") << "\n"
      << "argmin u*  " << (cert.argmin ? num(*cert.argmin) : "-") << "\n"
      << "cloud size " << cert.cloud_size << "\n\n"
      << std::left << std::setw(12) << "epsilon" << std::setw(10) << "active" << "1/||u_eps||\n";
  for (const auto& d : cert.epsilon_diagnostics) {
    out << std::setw(12) << num(d.epsilon) << std::setw(10) << d.active_indices << num(d.value) << "\n";
  }
  return kOk;
}

int cmd_lip_sample(const Scenario& scen, const Settings& s, std::ostream& out) {
  SampleOptions so;
  so.radii = s.radii.empty() ? scen.radii : s.radii;
  so.samples_per_radius = s.samples > 0 ? s.samples : scen.samples;
  so.seed = scen.seed;
  so.threads = s.threads;
  const auto rows = lip_sample(scen.instance(), probe_point(scen, s), so);
  if (s.pretty) {
    out << std::left << std::setw(24) << "radius" << std::setw(24) << "max ratio" << std::setw(10) << "samples"
        << std::setw(10) << "violated" << "infinite\n";
  }
  for (const auto& r : rows) {
    if (s.pretty) {
      out << std::setw(24) << num(r.radius) << std::setw(24) << num(r.max_ratio) << std::setw(10) << r.samples
          << std::setw(10) << r.violated << r.infinite << "\n";
    } else {
      out << num(r.radius) << " " << num(r.max_ratio) << " " << r.samples << " " << r.violated << " "
          << r.infinite << "\n";
    }
  }
  return kOk;
}

int cmd_coderivative(const Scenario& scen, const Settings& s, std::ostream& out) {
  const auto inst = scen.instance();
  const Vector xbar = probe_point(scen, s);
  if (s.x_star.empty()) {
    out << num(coderivative_norm(inst, xbar).value) << "\n";
    return kOk;
  }
  const Vector p_star = s.p_star.empty() ? Vector::Zero(static_cast<Eigen::Index>(scen.system.size()))
                                         : to_vector(s.p_star);
  const auto m = coderivative_member(inst, xbar, p_star, to_vector(s.x_star));
  out << (m.member ? "member" : "not-member") << " " << num(m.residual) << "\n";
  return kOk;
}

int cmd_farkas(const Scenario& scen, const Settings& s, std::ostream& out) {
  const auto inst = scen.instance();
  const auto p = probe_parameter(scen, s);
  std::vector<ConsequenceQuery> queries;
  if (!s.v.empty()) {
    queries.push_back({to_vector(s.v), s.alpha});
  } else {
    queries = probe_of(scen, s).queries;
  }
  if (queries.empty()) throw ValidationError("no queries: pass --v/--alpha or add queries to the probe");
  for (const auto& q : queries) {
    const auto r = farkas_consequence(inst, p, q, {1000, scen.seed});
    out << (r.holds ? "holds" : "does-not-hold") << " " << num(r.residual);
    if (r.holds) out << " soundness " << r.soundness_samples - r.soundness_violations << "/" << r.soundness_samples;
    out << "\n";
  }
  return kOk;
}

int cmd_stationarity(const Scenario& scen, const Settings& s, std::ostream& out) {
  const auto inst = scen.instance();
  const Vector xbar = probe_point(scen, s);
  UpperStationarity res;
  if (!s.grad_p.empty() || !s.grad_x.empty()) {
    res = check_stationarity_upper(inst, xbar, {{to_vector(s.grad_p), to_vector(s.grad_x)}});
  } else if (scen.objective) {
    res = check_stationarity(inst, xbar, *scen.objective);
  } else {
    throw ValidationError("no objective: pass --grad-p/--grad-x or declare one in the scenario");
  }
  for (const auto& c : res.certificates) out << to_string(c.status) << " " << num(c.residual) << "\n";
  if (res.vacuous) out << "vacuous\n";
  return kOk;
}

int cmd_run(const Scenario& scen, const Settings& s, std::ostream& out) {
  const auto report = run_scenario(scen, {s.threads});
  const WriteOptions wo{s.pretty, s.timings};
  if (s.format == "csv") {
    if (s.out.empty()) throw ValidationError("--format csv needs --out <directory>");
    write_report(report, s.out, ReportFormat::kCsv, wo);
  } else if (s.out.empty()) {
    out << report_json(report, wo);
  } else {
    write_report(report, s.out, ReportFormat::kJson, wo);
  }
  return kOk;
}

int cmd_list(std::ostream& out) {
  for (const auto& name : builtin_names()) out << name << "  " << builtin_description(name) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantitative stability certificates for convex inequality systems", "sipstab"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Settings s;
  Flags f;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"check-ssc", "Test the strong Slater condition"},
      {"distance", "Distance to F(p) by the dual formula and by projection"},
      {"lip-bound", "Exact Lipschitz bound lip F(0, xbar)"},
      {"lip-sample", "Sampled quotients dist(x; F(p)) / dist(p; F^-1(x))"},
      {"coderivative", "Coderivative norm, or membership of (p*, x*) with --x-star"},
      {"farkas", "Is <v,x> <= alpha a consequence of sigma(p)?"},
      {"stationarity", "Stationarity certificate for the declared objective"},
      {"run", "Run every analysis and write a report"},
  };
  std::map<std::string, CLI::App*> commands;
  std::vector<Flags> flags(std::size(subs));
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    auto* sub = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(sub, s, flags[i]);
    commands[subs[i].name] = sub;
  }
  auto* list = app.add_subcommand("list-builtins", "List built-in scenarios");

  commands["distance"]->add_option("--x", s.x, "Point (comma-separated)")->delimiter(',');
  for (const char* name : {"distance", "farkas"}) {
    commands[name]->add_option("--p", s.p, "Parameter, one entry per constraint")->delimiter(',');
  }
  commands["lip-sample"]->add_option("--radii", s.radii, "Comma-separated radii")->delimiter(',')->check(CLI::PositiveNumber);
  commands["lip-sample"]->add_option("--samples", s.samples, "Samples per radius")->check(CLI::PositiveNumber);
  commands["coderivative"]->add_option("--p-star", s.p_star, "p* (comma-separated)")->delimiter(',');
  commands["coderivative"]->add_option("--x-star", s.x_star, "x* (comma-separated)")->delimiter(',');
  auto* v = commands["farkas"]->add_option("--v", s.v, "Query vector v")->delimiter(',');
  commands["farkas"]->add_option("--alpha", s.alpha, "Query right-hand side")->needs(v);
  commands["stationarity"]->add_option("--grad-p", s.grad_p, "Objective gradient in p")->delimiter(',');
  commands["stationarity"]->add_option("--grad-x", s.grad_x, "Objective gradient in x")->delimiter(',');
  commands["run"]->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  commands["run"]->add_flag("--timings", s.timings, "Include wall-clock timings (breaks byte reproducibility)");

  std::vector<std::string> argv(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (list->parsed()) return cmd_list(out);
    for (std::size_t i = 0; i < std::size(subs); ++i) {
      const std::string name = subs[i].name;
      if (!commands[name]->parsed()) continue;
      const Scenario scen = load(s, flags[i]);
      if (name == "check-ssc") return cmd_check_ssc(scen, s, out, err);
      if (name == "distance") return cmd_distance(scen, s, out);
      if (name == "lip-bound") return cmd_lip_bound(scen, s, out);
      if (name == "lip-sample") return cmd_lip_sample(scen, s, out);
      if (name == "coderivative") return cmd_coderivative(scen, s, out);
      if (name == "farkas") return cmd_farkas(scen, s, out);
      if (name == "stationarity") return cmd_stationarity(scen, s, out);
      if (name == "run") return cmd_run(scen, s, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const PrerequisiteError& e) {
    err << "prerequisite failed: " << e.what() << "\n";
    return kPrerequisite;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace sipstab::cli
