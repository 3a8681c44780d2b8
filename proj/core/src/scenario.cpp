#include <sipstab/error.hpp>
#include <sipstab/format.hpp>
#include <sipstab/scenario.hpp>

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace sipstab {

Instance Scenario::instance() const {
  Instance inst(system, grid);
  inst.tol = tol;
  if (closure) inst.closure_points = closure_points_from(closure->points, system.dimension());
  return inst;
}

Parameter Scenario::parameter(const Probe& probe) const {
  if (probe.parameter) return {*probe.parameter};
  return Parameter::zero(system);
}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  throw ValidationError(what, line_of(node));
}

void expect_keys(const YAML::Node& node, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

YAML::Node require(const YAML::Node& node, const char* key, const std::string& where) {
  const auto child = node[key];
  if (!child) fail(node, where + " is missing required key '" + key + "'");
  return child;
}

double number(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a number");
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) fail(node, what + " must be finite");
    return v;
  } catch (const YAML::BadConversion&) {
    fail(node, what + " must be a number, got '" + node.Scalar() + "'");
  }
}

std::int64_t integer(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be an integer");
  try {
    return node.as<std::int64_t>();
  } catch (const YAML::BadConversion&) {
    fail(node, what + " must be an integer, got '" + node.Scalar() + "'");
  }
}

std::string text(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a string");
  return node.Scalar();
}

Vector vector_of(const YAML::Node& node, const std::string& what, Eigen::Index size = -1) {
  if (!node.IsSequence()) fail(node, what + " must be a list of numbers");
  if (size >= 0 && static_cast<Eigen::Index>(node.size()) != size) {
    fail(node, what + " must have " + std::to_string(size) + " entries, got " +
                   std::to_string(node.size()));
  }
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(node[i], what);
  return v;
}

Matrix matrix_of(const YAML::Node& node, const std::string& what, Eigen::Index size) {
  if (!node.IsSequence() || static_cast<Eigen::Index>(node.size()) != size) {
    fail(node, what + " must be a list of " + std::to_string(size) + " rows");
  }
  Matrix m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    m.row(i) = vector_of(node[static_cast<std::size_t>(i)], what + " row", size).transpose();
  }
  return m;
}

std::vector<double> numbers(const YAML::Node& node, const std::string& what) {
  const Vector v = vector_of(node, what);
  return {v.data(), v.data() + v.size()};
}

ConvexFunction parse_function(const YAML::Node& node, int n, const std::string& where) {
  int forms = 0;
  for (const char* key : {"affine", "quadratic", "max_affine"}) forms += node[key] ? 1 : 0;
  if (forms != 1) fail(node, where + " needs exactly one of affine, quadratic, max_affine");
  try {
    if (const auto a = node["affine"]) {
      expect_keys(a, where + ".affine", {"a", "b"});
      return ConvexFunction::affine(vector_of(require(a, "a", where), "a", n),
                                    number(require(a, "b", where), "b"));
    }
    if (const auto q = node["quadratic"]) {
      expect_keys(q, where + ".quadratic", {"Q", "c", "d"});
      const Vector c = q["c"] ? vector_of(q["c"], "c", n) : Vector::Zero(n);
      const double d = q["d"] ? number(q["d"], "d") : 0.0;
      return ConvexFunction::quadratic(matrix_of(require(q, "Q", where), "Q", n), c, d);
    }
    const auto list = node["max_affine"];
    if (!list.IsSequence() || list.size() == 0) fail(list, where + ".max_affine must be a nonempty list");
    std::vector<AffinePiece> pieces;
    for (const auto& piece : list) {
      expect_keys(piece, where + ".max_affine piece", {"a", "b"});
      pieces.push_back({vector_of(require(piece, "a", where), "a", n), number(require(piece, "b", where), "b")});
    }
    return ConvexFunction::max_affine(std::move(pieces));
  } catch (const ValidationError& e) {
    if (e.line() > 0) throw;
    const auto form = node["affine"] ? node["affine"] : node["quadratic"] ? node["quadratic"] : node["max_affine"];
    fail(form, where + ": " + e.what());
  }
}

Objective parse_objective(const YAML::Node& node, Eigen::Index size) {
  expect_keys(node, "objective", {"quadratic", "min_affine"});
  if (node.size() != 1) fail(node, "objective needs exactly one of quadratic, min_affine");
  try {
    if (const auto q = node["quadratic"]) {
      expect_keys(q, "objective.quadratic", {"H", "g", "c"});
      const Vector g = q["g"] ? vector_of(q["g"], "g", size) : Vector::Zero(size);
      const double c = q["c"] ? number(q["c"], "c") : 0.0;
      return Objective::quadratic(matrix_of(require(q, "H", "objective"), "H", size), g, c);
    }
    const auto list = node["min_affine"];
    if (!list.IsSequence() || list.size() == 0) fail(list, "objective.min_affine must be a nonempty list");
    std::vector<ObjectivePiece> pieces;
    for (const auto& piece : list) {
      expect_keys(piece, "objective.min_affine piece", {"a", "b"});
      pieces.push_back({vector_of(require(piece, "a", "objective"), "a", size),
                        piece["b"] ? number(piece["b"], "b") : 0.0});
    }
    return Objective::min_affine(std::move(pieces));
  } catch (const ValidationError& e) {
    if (e.line() > 0) throw;
    fail(node.begin()->second, e.what());
  }
}

Tolerances parse_tolerances(const YAML::Node& node) {
  expect_keys(node, "tolerances",
              {"feasibility", "optimality", "membership", "inconclusive", "projection", "slater"});
  Tolerances tol;
  auto read = [&](const char* key, double* field) {
    if (const auto v = node[key]) {
      *field = number(v, key);
      if (!(*field > 0.0)) fail(v, std::string("tolerance ") + key + " must be positive");
    }
  };
  read("feasibility", &tol.feasibility);
  read("optimality", &tol.optimality);
  read("membership", &tol.membership);
  read("inconclusive", &tol.inconclusive);
  read("projection", &tol.projection);
  read("slater", &tol.slater);
  return tol;
}

Scenario parse_root(const YAML::Node& root) {
  expect_keys(root, "scenario",
              {"name", "dimension", "truncation", "constraints", "closure", "grid", "probes", "objective",
               "tolerances", "seed", "lip_sample", "epsilon_schedule"});
  const std::string name = text(require(root, "name", "scenario"), "name");
  const auto dim_node = require(root, "dimension", "scenario");
  const auto n64 = integer(dim_node, "dimension");
  if (n64 < 1 || n64 > 64) fail(dim_node, "dimension must be between 1 and 64");
  const int n = static_cast<int>(n64);

  std::optional<Truncation> truncation;
  if (const auto t = root["truncation"]) {
    expect_keys(t, "truncation", {"family", "level"});
    truncation = Truncation{t["family"] ? text(t["family"], "family") : "",
                            static_cast<int>(integer(require(t, "level", "truncation"), "level"))};
  }

  const auto list = require(root, "constraints", "scenario");
  if (!list.IsSequence() || list.size() == 0) fail(list, "constraints must be a nonempty list");
  std::vector<Constraint> constraints;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& c = list[i];
    expect_keys(c, "constraint", {"label", "affine", "quadratic", "max_affine"});
    const std::string label = c["label"] ? text(c["label"], "label") : "t" + std::to_string(i);
    if (!labels.insert(label).second) fail(c, "duplicate constraint label '" + label + "'");
    constraints.push_back({label, parse_function(c, n, "constraint '" + label + "'")});
  }
  Scenario s{name, InequalitySystem(n, std::move(constraints), truncation)};
  const auto m = static_cast<Eigen::Index>(s.system.size());

  if (const auto g = root["grid"]) {
    expect_keys(g, "grid", {"lower", "upper", "points_per_axis", "anchors"});
    if (g["lower"]) s.grid.lower = number(g["lower"], "grid.lower");
    if (g["upper"]) s.grid.upper = number(g["upper"], "grid.upper");
    if (g["points_per_axis"]) {
      const auto k = integer(g["points_per_axis"], "grid.points_per_axis");
      if (k < 1 || k > 100000) fail(g["points_per_axis"], "grid.points_per_axis must be in [1, 100000]");
      s.grid.points_per_axis = static_cast<int>(k);
    }
    if (!(s.grid.lower <= s.grid.upper)) fail(g, "grid.lower must not exceed grid.upper");
    if (const auto a = g["anchors"]) {
      if (!a.IsSequence()) fail(a, "grid.anchors must be a list of points");
      for (const auto& p : a) s.grid.anchors.push_back(vector_of(p, "grid anchor", n));
    }
  }

  if (const auto c = root["closure"]) {
    expect_keys(c, "closure", {"justification", "points"});
    ClosureDeclaration decl;
    decl.justification = c["justification"] ? text(c["justification"], "closure.justification") : "";
    if (decl.justification.empty()) fail(c, "closure points require a nonempty justification");
    const auto pts = require(c, "points", "closure");
    if (!pts.IsSequence()) fail(pts, "closure.points must be a list");
    for (const auto& p : pts) decl.points.push_back(vector_of(p, "closure point", n + 1));
    s.closure = std::move(decl);
  }

  if (const auto probes = root["probes"]) {
    if (!probes.IsSequence()) fail(probes, "probes must be a list");
    for (const auto& node : probes) {
      expect_keys(node, "probe", {"point", "parameter", "distance_points", "queries"});
      Probe probe;
      probe.point = vector_of(require(node, "point", "probe"), "probe point", n);
      if (node["parameter"]) probe.parameter = vector_of(node["parameter"], "probe parameter", m);
      if (const auto d = node["distance_points"]) {
        if (!d.IsSequence()) fail(d, "distance_points must be a list of points");
        for (const auto& x : d) probe.distance_points.push_back(vector_of(x, "distance point", n));
      }
      if (const auto q = node["queries"]) {
        if (!q.IsSequence()) fail(q, "queries must be a list");
        for (const auto& item : q) {
          expect_keys(item, "query", {"v", "alpha"});
          probe.queries.push_back({vector_of(require(item, "v", "query"), "query v", n),
                                   number(require(item, "alpha", "query"), "query alpha")});
        }
      }
      s.probes.push_back(std::move(probe));
    }
  }

  if (const auto o = root["objective"]) s.objective = parse_objective(o, m + n);
  if (const auto t = root["tolerances"]) s.tol = parse_tolerances(t);
  if (const auto seed = root["seed"]) {
    const auto v = integer(seed, "seed");
    if (v < 0) fail(seed, "seed must be nonnegative");
    s.seed = static_cast<std::uint64_t>(v);
  }
  if (const auto ls = root["lip_sample"]) {
    expect_keys(ls, "lip_sample", {"radii", "samples"});
    if (ls["radii"]) {
      s.radii = numbers(ls["radii"], "lip_sample.radii");
      for (double r : s.radii) {
        if (!(r > 0.0)) fail(ls["radii"], "lip_sample.radii must be positive");
      }
    }
    if (ls["samples"]) {
      const auto k = integer(ls["samples"], "lip_sample.samples");
      if (k < 0) fail(ls["samples"], "lip_sample.samples must be nonnegative");
      s.samples = static_cast<std::size_t>(k);
    }
  }
  if (const auto e = root["epsilon_schedule"]) {
    s.epsilon_schedule = numbers(e, "epsilon_schedule");
    for (double eps : s.epsilon_schedule) {
      if (eps < 0.0) fail(e, "epsilon_schedule entries must be nonnegative");
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

void emit(YAML::Emitter& out, double v) { out << format_double(v); }

void emit(YAML::Emitter& out, const Vector& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) emit(out, v(i));
  out << YAML::EndSeq;
}

void emit(YAML::Emitter& out, const Matrix& m) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < m.rows(); ++i) emit(out, Vector(m.row(i).transpose()));
  out << YAML::EndSeq;
}

void emit_function(YAML::Emitter& out, const ConvexFunction& f) {
  if (const auto* a = std::get_if<Affine>(&f.form())) {
    out << YAML::Key << "affine" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "a" << YAML::Value;
    emit(out, a->a);
    out << YAML::Key << "b" << YAML::Value;
    emit(out, a->b);
    out << YAML::EndMap;
  } else if (const auto* q = std::get_if<Quadratic>(&f.form())) {
    out << YAML::Key << "quadratic" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "Q" << YAML::Value;
    emit(out, q->Q);
    out << YAML::Key << "c" << YAML::Value;
    emit(out, q->c);
    out << YAML::Key << "d" << YAML::Value;
    emit(out, q->d);
    out << YAML::EndMap;
  } else {
    out << YAML::Key << "max_affine" << YAML::Value << YAML::BeginSeq;
    for (const auto& piece : std::get<MaxAffine>(f.form()).pieces) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "a" << YAML::Value;
      emit(out, piece.a);
      out << YAML::Key << "b" << YAML::Value;
      emit(out, piece.b);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ValidationError(e.msg, e.mark.line + 1, source);
  }
  try {
    return parse_root(root);
  } catch (const ValidationError& e) {
    throw ValidationError(e.message(), e.line(), source);
  } catch (const DimensionError& e) {
    throw ValidationError(e.what(), 0, source);
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string dump_scenario(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << s.name;
  out << YAML::Key << "dimension" << YAML::Value << s.system.dimension();
  if (const auto& t = s.system.truncation()) {
    out << YAML::Key << "truncation" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "family" << YAML::Value << YAML::DoubleQuoted << t->family;
    out << YAML::Key << "level" << YAML::Value << t->level;
    out << YAML::EndMap;
  }
  out << YAML::Key << "constraints" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : s.system.constraints()) {
    out << YAML::BeginMap << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << c.label;
    emit_function(out, c.function);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (s.closure) {
    out << YAML::Key << "closure" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "justification" << YAML::Value << YAML::DoubleQuoted << s.closure->justification;
    out << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : s.closure->points) emit(out, p);
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lower" << YAML::Value;
  emit(out, s.grid.lower);
  out << YAML::Key << "upper" << YAML::Value;
  emit(out, s.grid.upper);
  out << YAML::Key << "points_per_axis" << YAML::Value << s.grid.points_per_axis;
  if (!s.grid.anchors.empty()) {
    out << YAML::Key << "anchors" << YAML::Value << YAML::BeginSeq;
    for (const auto& a : s.grid.anchors) emit(out, a);
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  if (!s.probes.empty()) {
    out << YAML::Key << "probes" << YAML::Value << YAML::BeginSeq;
    for (const auto& probe : s.probes) {
      out << YAML::BeginMap << YAML::Key << "point" << YAML::Value;
      emit(out, probe.point);
      if (probe.parameter) {
        out << YAML::Key << "parameter" << YAML::Value;
        emit(out, *probe.parameter);
      }
      if (!probe.distance_points.empty()) {
        out << YAML::Key << "distance_points" << YAML::Value << YAML::BeginSeq;
        for (const auto& x : probe.distance_points) emit(out, x);
        out << YAML::EndSeq;
      }
      if (!probe.queries.empty()) {
        out << YAML::Key << "queries" << YAML::Value << YAML::BeginSeq;
        for (const auto& q : probe.queries) {
          out << YAML::Flow << YAML::BeginMap << YAML::Key << "v" << YAML::Value;
          emit(out, q.v);
          out << YAML::Key << "alpha" << YAML::Value;
          emit(out, q.alpha);
          out << YAML::EndMap;
        }
        out << YAML::EndSeq;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (s.objective) {
    out << YAML::Key << "objective" << YAML::Value << YAML::BeginMap;
    if (const auto* q = std::get_if<QuadraticObjective>(&s.objective->form())) {
      out << YAML::Key << "quadratic" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "H" << YAML::Value;
      emit(out, q->H);
      out << YAML::Key << "g" << YAML::Value;
      emit(out, q->g);
      out << YAML::Key << "c" << YAML::Value;
      emit(out, q->c);
      out << YAML::EndMap;
    } else {
      out << YAML::Key << "min_affine" << YAML::Value << YAML::BeginSeq;
      for (const auto& piece : std::get<MinAffineObjective>(s.objective->form()).pieces) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "a" << YAML::Value;
        emit(out, piece.a);
        out << YAML::Key << "b" << YAML::Value;
        emit(out, piece.b);
        out << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  for (const auto& [key, value] : {std::pair{"feasibility", s.tol.feasibility},
                                   std::pair{"optimality", s.tol.optimality},
                                   std::pair{"membership", s.tol.membership},
                                   std::pair{"inconclusive", s.tol.inconclusive},
                                   std::pair{"projection", s.tol.projection},
                                   std::pair{"slater", s.tol.slater}}) {
    out << YAML::Key << key << YAML::Value;
    emit(out, value);
  }
  out << YAML::EndMap;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "lip_sample" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "radii" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double r : s.radii) emit(out, r);
  out << YAML::EndSeq;
  out << YAML::Key << "samples" << YAML::Value << s.samples;
  out << YAML::EndMap;
  out << YAML::Key << "epsilon_schedule" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double e : s.epsilon_schedule) emit(out, e);
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file '" + path + "'");
  out << dump_scenario(s);
  if (!out) throw Error("failed writing scenario file '" + path + "'");
}

}  // namespace sipstab
