#include <sipstab/error.hpp>
#include <sipstab/format.hpp>
#include <sipstab/report.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace sipstab {

const char* library_version() { return SIPSTAB_VERSION; }

namespace {

using Json = nlohmann::ordered_json;

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <class F>
Status guarded(F&& f) {
  try {
    f();
    return "ok";
  } catch (const PrerequisiteError& e) {
    return std::string("skipped: ") + e.what();
  } catch (const std::exception& e) {
    return std::string("error: ") + e.what();
  }
}

class Stopwatch {
 public:
  explicit Stopwatch(double* sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    *sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  double* sink_;
  std::chrono::steady_clock::time_point start_;
};

constexpr const char* kSscSkip = "skipped: strong Slater condition fails";

ProbeReport run_probe(const Scenario& s, const Instance& inst, const Probe& probe, bool ssc,
                      const RunOptions& options, std::map<std::string, double>& timings) {
  ProbeReport pr;
  pr.point = probe.point;
  pr.parameter = s.parameter(probe);

  {
    Stopwatch w(&timings["distance"]);
    for (const auto& x : probe.distance_points) {
      DistanceResult d;
      d.point = x;
      d.primal_status = guarded([&] { d.primal = distance_primal(s.system, pr.parameter, x, s.tol); });
      d.dual_status = guarded([&] { d.dual = distance_dual(inst, pr.parameter, x); });
      pr.distances.push_back(std::move(d));
    }
  }

  if (!ssc) {
    pr.modulus_status = kSscSkip;
    pr.trend_status = kSscSkip;
  } else {
    Stopwatch w(&timings["modulus"]);
    pr.modulus_status = guarded([&] {
      pr.modulus = lip_bound(inst, probe.point, s.epsilon_schedule);
      pr.coderivative = coderivative_norm(inst, probe.point);
    });
  }
  if (ssc) {
    Stopwatch w(&timings["lip_sample"]);
    if (s.samples == 0 || s.radii.empty()) {
      pr.trend_status = "skipped: no samples requested";
    } else {
      SampleOptions so;
      so.radii = s.radii;
      so.samples_per_radius = s.samples;
      so.seed = s.seed;
      so.threads = options.threads;
      pr.trend_status = guarded([&] { pr.trend = lip_sample(inst, probe.point, so); });
    }
  }

  {
    Stopwatch w(&timings["farkas"]);
    for (const auto& q : probe.queries) {
      FarkasResult f;
      f.query = q;
      f.status = guarded([&] { f.result = farkas_consequence(inst, pr.parameter, q, {1000, s.seed}); });
      pr.farkas.push_back(std::move(f));
    }
  }

  if (s.objective) {
    Stopwatch w(&timings["stationarity"]);
    pr.stationarity_status =
        guarded([&] { pr.stationarity = check_stationarity(inst, probe.point, *s.objective); });
  }
  return pr;
}

// ---------------------------------------------------------------------------
// JSON

Json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json vec(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

Json support_json(const SimplexWeights& w, const CharacteristicCloud& cloud, const InequalitySystem& system) {
  Json out = Json::array();
  for (std::size_t i : w.support) {
    Json item;
    item["index"] = i;
    const auto* pt = i < cloud.size() ? &cloud.at(i) : nullptr;
    item["origin"] = pt && pt->origin ? system[*pt->origin].label : "closure";
    item["lambda"] = num(w.lambda(static_cast<Eigen::Index>(i)));
    out.push_back(std::move(item));
  }
  return out;
}

Json cone_json(const ConeWeights& w) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < w.mu.size(); ++i) {
    if (w.mu(i) > 1e-12) out.push_back(Json{{"index", i}, {"mu", num(w.mu(i))}});
  }
  return out;
}

Json ssc_json(const SlaterCertificate& c) {
  Json j;
  j["satisfied"] = c.satisfied;
  j["witness"] = c.witness ? vec(*c.witness) : Json();
  j["slack"] = num(c.slack);
  j["search_radius"] = num(c.search_radius);
  j["dual_check"] = num(c.dual_check);
  j["dual_satisfied"] = c.dual_satisfied;
  j["routes_agree"] = c.routes_agree;
  j["diagnostic"] = c.diagnostic;
  return j;
}

Json modulus_json(const ProbeReport& pr, const Report& r, const Instance& inst) {
  Json j;
  j["status"] = pr.modulus_status;
  if (!pr.modulus) return j;
  const auto& m = *pr.modulus;
  j["lip_value"] = num(m.lip_value);
  j["mode"] = to_string(m.mode);
  j["attained"] = m.attained;
  j["argmin"] = m.argmin ? vec(*m.argmin) : Json();
  j["alpha"] = num(m.alpha);
  const auto cloud = inst.cloud(Parameter::zero(inst.system), with_anchor(inst.grids, pr.point));
  j["support"] = support_json(m.weights, cloud, r.scenario->system);
  j["cloud_size"] = m.cloud_size;
  j["coderivative_norm"] = pr.coderivative ? num(pr.coderivative->value) : Json();
  Json eps = Json::array();
  for (const auto& d : m.epsilon_diagnostics) {
    eps.push_back(Json{{"epsilon", num(d.epsilon)}, {"active_indices", d.active_indices}, {"value", num(d.value)}});
  }
  j["epsilon_diagnostics"] = std::move(eps);
  return j;
}

Json stationarity_json(const StationarityCertificate& c) {
  Json j;
  j["status"] = to_string(c.status);
  j["satisfied"] = c.satisfied;
  j["residual"] = num(c.residual);
  j["grad_p"] = vec(c.grad_p);
  j["grad_x"] = vec(c.grad_x);
  j["weights"] = cone_json(c.weights);
  return j;
}

Json probe_json(const ProbeReport& pr, const Report& r, const Instance& inst) {
  Json j;
  j["point"] = vec(pr.point);
  j["parameter"] = vec(pr.parameter.values);

  Json dist = Json::array();
  for (const auto& d : pr.distances) {
    Json item;
    item["point"] = vec(d.point);
    item["primal_status"] = d.primal_status;
    if (d.primal) {
      item["primal"] = num(d.primal->value);
      item["primal_converged"] = d.primal->converged;
    }
    item["dual_status"] = d.dual_status;
    if (d.dual) {
      item["dual"] = num(d.dual->value);
      item["dual_finite"] = d.dual->finite;
      item["gap"] = num(d.dual->gap);
      item["residual_gap"] = num(d.dual->residual_gap);
      item["projection"] = vec(d.dual->projection);
    }
    dist.push_back(std::move(item));
  }
  j["distances"] = std::move(dist);
  j["modulus"] = modulus_json(pr, r, inst);

  Json trend;
  trend["status"] = pr.trend_status;
  Json rows = Json::array();
  for (const auto& t : pr.trend) {
    rows.push_back(Json{{"radius", num(t.radius)},
                        {"max_ratio", num(t.max_ratio)},
                        {"samples", t.samples},
                        {"violated", t.violated},
                        {"infinite", t.infinite}});
  }
  trend["rows"] = std::move(rows);
  j["lip_sample"] = std::move(trend);

  Json farkas = Json::array();
  for (const auto& f : pr.farkas) {
    Json item;
    item["v"] = vec(f.query.v);
    item["alpha"] = num(f.query.alpha);
    item["status"] = f.status;
    if (f.result) {
      item["holds"] = f.result->holds;
      item["residual"] = num(f.result->residual);
      item["weights"] = cone_json(f.result->weights);
      item["soundness_samples"] = f.result->soundness_samples;
      item["soundness_violations"] = f.result->soundness_violations;
    }
    farkas.push_back(std::move(item));
  }
  j["farkas"] = std::move(farkas);

  Json st;
  st["status"] = pr.stationarity_status;
  if (pr.stationarity) {
    st["all_satisfied"] = pr.stationarity->all_satisfied;
    st["vacuous"] = pr.stationarity->vacuous;
    Json certs = Json::array();
    for (const auto& c : pr.stationarity->certificates) certs.push_back(stationarity_json(c));
    st["certificates"] = std::move(certs);
  }
  j["stationarity"] = std::move(st);
  return j;
}

Json tolerance_json(const Tolerances& t) {
  return Json{{"feasibility", t.feasibility}, {"optimality", t.optimality},
              {"membership", t.membership},   {"inconclusive", t.inconclusive},
              {"projection", t.projection},   {"slater", t.slater}};
}

// ---------------------------------------------------------------------------
// CSV

std::string joined(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_double(v(i));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ofstream open_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void write_csv_bundle(const Report& r, const std::filesystem::path& dir, const WriteOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
  const auto& system = r.scenario->system;

  {
    auto out = open_file(dir / "summary.csv");
    out << "key,value\n";
    out << "scenario," << csv_field(r.scenario->name) << "\n";
    out << "scenario_hash," << r.scenario_hash << "\n";
    out << "version," << r.version << "\n";
    out << "ssc_satisfied," << (r.ssc.satisfied ? "true" : "false") << "\n";
    out << "ssc_slack," << format_double(r.ssc.slack) << "\n";
    out << "ssc_dual_check," << format_double(r.ssc.dual_check) << "\n";
    out << "ssc_routes_agree," << (r.ssc.routes_agree ? "true" : "false") << "\n";
    for (std::size_t k = 0; k < r.probes.size(); ++k) {
      const auto& pr = r.probes[k];
      const std::string key = "probe" + std::to_string(k);
      out << key << "_modulus_status," << csv_field(pr.modulus_status) << "\n";
      if (pr.modulus) {
        out << key << "_mode," << to_string(pr.modulus->mode) << "\n";
        out << key << "_lip_value," << format_double(pr.modulus->lip_value) << "\n";
      }
      if (pr.coderivative) out << key << "_coderivative_norm," << format_double(pr.coderivative->value) << "\n";
    }
    if (options.include_timings) {
      for (const auto& [phase, seconds] : r.timings) out << "time_" << phase << "," << format_double(seconds) << "\n";
    }
  }
  {
    auto out = open_file(dir / "cloud.csv");
    write_cloud_csv(out, r.cloud, system);
  }
  {
    auto out = open_file(dir / "epsilon.csv");
    out << "probe,epsilon,active_indices,value\n";
    for (std::size_t k = 0; k < r.probes.size(); ++k) {
      if (!r.probes[k].modulus) continue;
      for (const auto& d : r.probes[k].modulus->epsilon_diagnostics) {
        out << k << "," << format_double(d.epsilon) << "," << d.active_indices << "," << format_double(d.value)
            << "\n";
      }
    }
  }
  {
    auto out = open_file(dir / "trend.csv");
    out << "probe,radius,max_ratio,samples,violated,infinite\n";
    for (std::size_t k = 0; k < r.probes.size(); ++k) {
      for (const auto& t : r.probes[k].trend) {
        out << k << "," << format_double(t.radius) << "," << format_double(t.max_ratio) << "," << t.samples
            << "," << t.violated << "," << t.infinite << "\n";
      }
    }
  }
  {
    auto out = open_file(dir / "distance.csv");
    out << "probe,point,primal_status,primal,dual_status,dual,gap,residual_gap\n";
    for (std::size_t k = 0; k < r.probes.size(); ++k) {
      for (const auto& d : r.probes[k].distances) {
        out << k << "," << joined(d.point) << "," << csv_field(d.primal_status) << ","
            << (d.primal ? format_double(d.primal->value) : "") << "," << csv_field(d.dual_status) << ","
            << (d.dual ? format_double(d.dual->value) : "") << ","
            << (d.dual ? format_double(d.dual->gap) : "") << ","
            << (d.dual ? format_double(d.dual->residual_gap) : "") << "\n";
      }
    }
  }
}

}  // namespace

Report run_scenario(const Scenario& s, const RunOptions& options) {
  Report r;
  r.scenario = std::make_shared<const Scenario>(s);
  r.scenario_hash = fnv1a(dump_scenario(s));
  r.version = library_version();
  const Instance inst = s.instance();
  {
    Stopwatch w(&r.timings["ssc"]);
    r.ssc = check_ssc(inst);
    r.cloud = inst.cloud(Parameter::zero(s.system));
  }
  for (const auto& probe : s.probes) {
    r.probes.push_back(run_probe(s, inst, probe, r.ssc.satisfied, options, r.timings));
  }
  return r;
}

std::string report_json(const Report& r, const WriteOptions& options) {
  const Scenario& s = *r.scenario;
  const Instance inst = s.instance();
  Json j;
  j["tool"] = "sipstab";
  j["version"] = r.version;
  Json scen;
  scen["name"] = s.name;
  scen["hash"] = r.scenario_hash;
  scen["dimension"] = s.system.dimension();
  scen["constraints"] = s.system.size();
  if (const auto& t = s.system.truncation()) scen["truncation"] = Json{{"family", t->family}, {"level", t->level}};
  scen["closure_points"] = s.closure ? s.closure->points.size() : 0;
  scen["seed"] = s.seed;
  j["scenario"] = std::move(scen);
  j["tolerances"] = tolerance_json(s.tol);
  j["ssc"] = ssc_json(r.ssc);
  j["cloud_size"] = r.cloud.size();
  Json probes = Json::array();
  for (const auto& pr : r.probes) probes.push_back(probe_json(pr, r, inst));
  j["probes"] = std::move(probes);
  if (options.include_timings) {
    Json t;
    for (const auto& [phase, seconds] : r.timings) t[phase] = seconds;
    j["timings"] = std::move(t);
  }
  return j.dump(options.pretty ? 2 : -1) + "\n";
}

void write_report(const Report& r, const std::string& path, ReportFormat format, const WriteOptions& options) {
  if (format == ReportFormat::kCsv) {
    write_csv_bundle(r, path, options);
    return;
  }
  auto out = open_file(path);
  out << report_json(r, options);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace sipstab
