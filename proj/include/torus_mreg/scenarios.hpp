// Config-driven experiment runner: every experiment the tool ships is a
// named scenario taking a JSON parameter object and returning a JSON report
// plus optional CSV sidecars. Reports are deterministic for a fixed config
// and seed: no clock is consulted and thread counts change nothing.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace torus_mreg::scenarios {

struct ExperimentConfig {
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = unset; the CLI layer resolves the fallback chain
  nlohmann::json tolerances = nlohmann::json::object();
};

// Parses {scenario?, params?, seed?, threads?, tolerances?}; unknown keys
// are errors so config typos surface instead of being ignored.
ExperimentConfig config_from_json(const nlohmann::json& j);

// A named CSV sidecar, fully rendered.
struct CsvTable {
  std::string name;
  std::string text;
};

struct ScenarioReport {
  nlohmann::json payload;
  bool pass = false;
  std::vector<std::string> findings;
  std::vector<CsvTable> tables;
};

const std::vector<std::string>& scenario_names();

ScenarioReport run_scenario(const ExperimentConfig& config);

}  // namespace torus_mreg::scenarios
