// Scenario runner: run, sweep, list-presets.

#include "relpower/error.hpp"
#include "relpower/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <vector>

namespace fs = std::filesystem;
using namespace relpower;

namespace {

constexpr int kOk = 0;
constexpr int kToleranceFailure = 1;
constexpr int kConfigInvalid = 2;
constexpr int kIoError = 3;

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::IoError: return kIoError;
    case ErrorCode::NonAffineDefect: return kToleranceFailure;
    default: return kConfigInvalid;
  }
}

fs::path output_dir(const std::string& flag, const ScenarioConfig& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RELPOWER_OUT"); env && *env) return env;
  if (config.output) return *config.output;
  return "results";
}

template <class Body>
int guarded(const std::string& label, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << label << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << label << ": " << e.what() << "\n";
    return kIoError;
  }
}

int report(const RunResult& r) {
  std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << "\n";
  for (const auto& f : r.failures) std::cout << "  " << f << "\n";
  return r.passed() ? kOk : kToleranceFailure;
}

int run_one(const fs::path& path, const std::string& out) {
  return guarded(path.string(), [&] {
    const ScenarioConfig config = load_scenario(path);
    const RunResult r = run_scenario(config);
    write_artifact(r, output_dir(out, config));
    return report(r);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative-power verification scenarios"};
  app.require_subcommand(1);

  std::string run_path, run_out, sweep_path, sweep_out, axis;
  bool all = false, as_json = false;

  auto* run = app.add_subcommand("run", "run a scenario file, or every *.json in a directory with --all");
  run->add_option("path", run_path, "scenario file or directory")->required();
  run->add_flag("--all", all, "run every scenario in the directory");
  run->add_option("--out", run_out, "output directory (overrides RELPOWER_OUT and the config)");

  auto* sweep = app.add_subcommand("sweep", "repeat a scenario over quadrature orders or FD steps");
  sweep->add_option("path", sweep_path, "scenario file")->required();
  sweep->add_option("--axis", axis, "quad or fd")->required()->check(CLI::IsMember({"quad", "fd"}));
  sweep->add_option("--out", sweep_out, "output directory");

  auto* list = app.add_subcommand("list-presets", "list motion, material and field presets");
  list->add_flag("--json", as_json, "machine-readable listing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kConfigInvalid;
  }

  if (*list) {
    if (as_json) {
      std::cout << list_presets_json().dump(2) << "\n";
    } else {
      std::cout << list_presets_text();
    }
    return kOk;
  }

  if (*sweep) {
    return guarded(sweep_path, [&] {
      const ScenarioConfig config = load_scenario(sweep_path);
      const RunResult r = run_sweep(config, axis == "quad" ? SweepAxis::Quadrature : SweepAxis::FiniteDifference);
      write_artifact(r, output_dir(sweep_out, config));
      return report(r);
    });
  }

  if (!all) return run_one(run_path, run_out);

  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(run_path, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  if (ec) {
    std::cerr << run_path << ": " << ec.message() << "\n";
    return kIoError;
  }
  if (files.empty()) {
    std::cerr << run_path << ": no scenario files\n";
    return kConfigInvalid;
  }
  std::sort(files.begin(), files.end());
  int worst = kOk;
  for (const auto& f : files) worst = std::max(worst, run_one(f, run_out));
  return worst;
}
