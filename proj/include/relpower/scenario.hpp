#pragma once

// Declarative scenario files, the verification checks they enable, and the
// CSV/manifest artifacts a run produces.

#include "relpower/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relpower {

inline constexpr const char* kToolVersion = "1.0.0";

/// A scenario document that passed validation. Sub-documents are kept as
/// JSON so the same scenario can be rebuilt with other quadrature orders or
/// derivative modes during sweeps.
struct ScenarioConfig {
  nlohmann::json document;
  std::string name;
  std::vector<std::string> checks;
  std::uint64_t seed = 1;
  int sample_points = 100;
  std::optional<std::string> output;
};

/// Throws Error(ConfigInvalid) on any schema violation, unknown key included.
ScenarioConfig parse_scenario(const nlohmann::json& document);
/// Throws Error(IoError) when unreadable, Error(ConfigInvalid) when malformed.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Concrete objects built from a scenario.
struct ScenarioSetup {
  Scenario scenario;
  BodyPart part;
  VirtualFieldPair pair;
  std::optional<ObserverChange> observer;  ///< unset means sweep unit generators
  FiniteDifferenceSteps steps;
};

struct BuildOverrides {
  std::optional<int> quadrature_order;
  std::optional<DerivativeMode> mode;
  std::optional<FiniteDifferenceSteps> steps;  ///< absolute lengths
};

ScenarioSetup build_setup(const ScenarioConfig& config, const BuildOverrides& overrides = {});

/// Evaluates F at every quadrature node; throws NonPositiveJacobian or
/// EvaluationOutOfDomain before any check runs.
void validate_kinematics(const ScenarioSetup& setup);

/// Plain CSV table with a fixed column order.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

std::string format_number(double v);

struct RunResult {
  std::string name;
  std::map<std::string, Table> tables;  ///< file name → table
  nlohmann::json manifest;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Runs every check listed in the scenario.
RunResult run_scenario(const ScenarioConfig& config);

enum class SweepAxis { Quadrature, FiniteDifference };

/// Repeats the scenario over quadrature orders or finite-difference steps
/// and records the error of each run in convergence.csv.
RunResult run_sweep(const ScenarioConfig& config, SweepAxis axis);

/// Writes tables and manifest.json into out_dir/<name>, replacing any
/// previous artifact atomically (temp directory + rename).
void write_artifact(const RunResult& result, const std::filesystem::path& out_dir);

std::string list_presets_text();
nlohmann::json list_presets_json();

/// FNV-1a of the canonical (sorted-key) dump of the document.
std::string config_hash(const nlohmann::json& document);

}  // namespace relpower
