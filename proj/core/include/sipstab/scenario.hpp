#pragma once

#include <sipstab/instance.hpp>
#include <sipstab/objective.hpp>
#include <sipstab/optimality.hpp>
#include <sipstab/stability.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sipstab {

/// Closure points of C(0) with the reason they belong there.
struct ClosureDeclaration {
  std::string justification;
  /// Points (u, alpha) in R^{n+1}.
  std::vector<Vector> points;
};

/// A reference point with the questions asked about it.
struct Probe {
  /// xbar in F(0), used by the modulus, coderivative and stationarity checks.
  Vector point;
  /// Parameter for the distance and Farkas checks; zero when omitted.
  std::optional<Vector> parameter;
  std::vector<Vector> distance_points;
  std::vector<ConsequenceQuery> queries;
};

struct Scenario {
  Scenario(std::string name_, InequalitySystem system_)
      : name(std::move(name_)), system(std::move(system_)) {}

  std::string name;
  InequalitySystem system;
  SampleGrid grid;
  std::optional<ClosureDeclaration> closure;
  std::vector<Probe> probes;
  std::optional<Objective> objective;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::vector<double> radii{0.1, 0.01, 0.001};
  std::size_t samples = 2000;
  std::vector<double> epsilon_schedule = default_epsilon_schedule();

  Instance instance() const;
  Parameter parameter(const Probe& probe) const;
};

/// Parses the YAML scenario format. Errors carry the 1-based line of the
/// offending node; `source` prefixes messages.
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
/// Throws ValidationError when the file cannot be read or is invalid.
Scenario load_scenario(const std::string& path);

/// YAML with every number written with 17 significant digits.
std::string dump_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace sipstab
