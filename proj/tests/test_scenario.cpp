#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relpower/error.hpp"
#include "relpower/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace relpower;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(RELPOWER_SOURCE_DIR) / "scenarios";

json minimal() {
  return json::parse(R"({
    "name": "minimal",
    "checks": ["standard_power"],
    "geometry": {"shape": "box", "half_extents": [0.5, 0.5, 0.5]},
    "material": {"model": "stvk", "lambda": 1, "mu": 1},
    "motion": {"preset": "simple_shear", "gamma": 0.2},
    "virtual_fields": {"v": {"preset": "constant", "value": [1, 0, 0]}, "w": {"preset": "zero"}}
  })");
}

ErrorCode parse_error(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document was accepted");
  return ErrorCode::IoError;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("minimal scenario parses with defaults") {
  const ScenarioConfig c = parse_scenario(minimal());
  CHECK(c.name == "minimal");
  CHECK(c.sample_points == 100);
  const ScenarioSetup s = build_setup(c);
  CHECK(s.part.quadrature().order == 6);
  CHECK(s.scenario.mode() == DerivativeMode::Analytic);
  CHECK(s.scenario.source_mode() == SourceMode::Closure);
  CHECK(s.steps.first == doctest::Approx(1e-5));
  CHECK(!s.observer.has_value());
}

TEST_CASE("schema violations are ConfigInvalid") {
  json d = minimal();
  d["unexpected"] = 1;
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["motion"]["gama"] = 0.1;
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d.erase("geometry");
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["material"]["model"] = "mooney";
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["checks"] = json::array({"standard_power", "standard_power"});
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["geometry"]["half_extents"] = json::array({1, 1});
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["material"] = json::parse(R"({"model": "quadratic", "lambda": 1, "mu": 1})");
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["name"] = "has space";
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["checks"] = json::array({"surface_independence"});
  CHECK(parse_error(d) == ErrorCode::ConfigInvalid);

  d = minimal();
  d["derivatives"] = {{"mode", "analytic"}};
  d["motion"] = {{"preset", "identity"}};
  CHECK_NOTHROW(parse_scenario(d));
}

TEST_CASE("non-positive Jacobian is caught before any check") {
  json d = minimal();
  d["motion"] = json::parse(R"({"preset": "homogeneous", "F": [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]})");
  const ScenarioConfig c = parse_scenario(d);
  try {
    run_scenario(c);
    FAIL("expected NonPositiveJacobian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveJacobian);
  }
}

TEST_CASE("missing and malformed files") {
  try {
    load_scenario("/nonexistent/scenario.json");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
  const fs::path bad = fs::temp_directory_path() / "relpower_bad.json";
  std::ofstream(bad) << "{ not json";
  try {
    load_scenario(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
  }
  fs::remove(bad);
}

TEST_CASE("number formatting and CSV layout") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  Table t{{"a", "b"}, {{"1", "2"}, {"3", ""}}};
  CHECK(t.to_csv() == "a,b\n1,2\n3,\n");
}

TEST_CASE("config hash is stable and key-order independent") {
  const json a = json::parse(R"({"x": 1, "y": [1, 2]})");
  const json b = json::parse(R"({"y": [1, 2], "x": 1})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash(json::parse(R"({"x": 2, "y": [1, 2]})")));
}

TEST_CASE("stvk_uniaxial: fixture row and determinism") {
  const ScenarioConfig c = load_scenario(kScenarios / "stvk_uniaxial.json");
  const RunResult a = run_scenario(c);
  const RunResult b = run_scenario(c);
  CHECK(a.passed());
  REQUIRE(a.tables.count("balances.csv") == 1);
  for (const auto& [name, table] : a.tables) CHECK(table.to_csv() == b.tables.at(name).to_csv());
  const std::string csv = a.tables.at("balances.csv").to_csv();
  CHECK(csv.find("fixture,expected-eshelby,0,0,0,-0.8777999999999") != std::string::npos);
  CHECK(a.manifest.at("tool_version") == kToolVersion);
  CHECK(a.manifest.at("checks").at("pointwise") == "pass");
}

TEST_CASE("artifacts are written atomically") {
  const fs::path out = fs::temp_directory_path() / "relpower_artifact_test";
  fs::remove_all(out);
  const RunResult r = run_scenario(load_scenario(kScenarios / "polynomial_exactness.json"));
  write_artifact(r, out);
  write_artifact(r, out);
  CHECK(fs::exists(out / r.name / "manifest.json"));
  CHECK(fs::exists(out / r.name / "power.csv"));
  CHECK_FALSE(fs::exists(out / ("." + r.name + ".tmp")));
  const std::string csv = slurp(out / r.name / "power.csv");
  CHECK(csv.find('\r') == std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("quadrature sweep is monotone and the fd sweep is V-shaped") {
  const ScenarioConfig c = load_scenario(kScenarios / "inner_power_graded_stvk.json");
  const RunResult q = run_sweep(c, SweepAxis::Quadrature);
  CHECK(q.passed());
  CHECK(q.tables.at("convergence.csv").rows.size() == 4);

  const RunResult f = run_sweep(c, SweepAxis::FiniteDifference);
  const auto& rows = f.tables.at("convergence.csv").rows;
  REQUIRE(rows.size() == 5);
  std::vector<double> err;
  for (const auto& r : rows) err.push_back(std::stod(r[4]));
  const auto best = std::min_element(err.begin(), err.end()) - err.begin();
  CHECK(best > 0);
  CHECK(best < 4);
  CHECK(err.front() > err[static_cast<std::size_t>(best)]);
  CHECK(err.back() > 100 * err[static_cast<std::size_t>(best)]);
}

TEST_CASE("preset listing") {
  const std::string text = list_presets_text();
  for (const char* name : {"stvk", "neo-hookean", "quadratic", "harmonic", "simple_shear", "rigid"})
    CHECK(text.find(name) != std::string::npos);
  const json j = list_presets_json();
  CHECK(j.at("materials").size() == 3);
  CHECK(j.at("motions").size() == 6);
}

TEST_CASE("every bundled scenario parses") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path()));
    ++count;
  }
  CHECK(count >= 10);
}
