#pragma once

#include <sipstab/optimality.hpp>
#include <sipstab/scenario.hpp>
#include <sipstab/stability.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sipstab {

/// Outcome of one step of a run: "ok", "skipped: <reason>" or "error: <message>".
using Status = std::string;

struct DistanceResult {
  Vector point;
  Status dual_status = "ok";
  std::optional<DualDistance> dual;
  Status primal_status = "ok";
  std::optional<PrimalDistance> primal;
};

struct FarkasResult {
  ConsequenceQuery query;
  Status status = "ok";
  std::optional<ConsequenceResult> result;
};

struct ProbeReport {
  Vector point;
  Parameter parameter;
  std::vector<DistanceResult> distances;
  Status modulus_status = "ok";
  std::optional<ModulusCertificate> modulus;
  std::optional<CoderivativeNorm> coderivative;
  Status trend_status = "ok";
  std::vector<TrendRow> trend;
  std::vector<FarkasResult> farkas;
  Status stationarity_status = "skipped: no objective";
  std::optional<UpperStationarity> stationarity;
};

struct Report {
  std::shared_ptr<const Scenario> scenario;
  /// FNV-1a 64 of the serialized scenario, as 16 hex digits.
  std::string scenario_hash;
  std::string version;
  SlaterCertificate ssc;
  /// C(0) on the scenario grids (with closure points).
  CharacteristicCloud cloud;
  std::vector<ProbeReport> probes;
  /// Wall-clock seconds per phase; serialized only when requested.
  std::map<std::string, double> timings;
};

struct RunOptions {
  unsigned threads = 1;
};

/// Runs every analysis of the scenario. Failures are recorded per step;
/// steps that need the strong Slater condition are skipped when it fails.
Report run_scenario(const Scenario& s, const RunOptions& options = {});

const char* library_version();

enum class ReportFormat { kJson, kCsv };

struct WriteOptions {
  bool pretty = false;
  bool include_timings = false;
};

/// The whole report as JSON with keys in a fixed order.
std::string report_json(const Report& r, const WriteOptions& options = {});

/// kJson writes one file at `path`. kCsv treats `path` as a directory and
/// writes summary.csv, cloud.csv, epsilon.csv, trend.csv and distance.csv.
void write_report(const Report& r, const std::string& path, ReportFormat format,
                  const WriteOptions& options = {});

}  // namespace sipstab
