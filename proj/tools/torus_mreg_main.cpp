#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "torus_mreg/common.hpp"
#include "torus_mreg/scenarios.hpp"

namespace {

// Wall-clock stamp attached only at this layer; the report payload itself
// stays clock-free so identical configs produce identical payloads.
std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torus multiplier and evolution-equation experiments"};
  std::string scenario, config_path, out_path;
  std::uint64_t seed = 0;
  int threads = 0;
  bool csv = false;

  std::string names;
  for (const auto& n : torus_mreg::scenarios::scenario_names())
    names += (names.empty() ? "" : ", ") + n;
  app.add_option("scenario", scenario, "one of: " + names)->required();
  app.add_option("--config", config_path, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* out_opt =
      app.add_option("--out", out_path, "write the JSON report to this file");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* threads_opt =
      app.add_option("--threads", threads, "worker thread count");
  app.add_flag("--csv", csv, "write CSV sidecar tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    std::ifstream in(config_path);
    auto cfg =
        torus_mreg::scenarios::config_from_json(nlohmann::json::parse(in));
    if (cfg.scenario.empty())
      cfg.scenario = scenario;
    else if (cfg.scenario != scenario)
      throw torus_mreg::Error("scenario '" + scenario +
                              "' does not match config scenario '" +
                              cfg.scenario + "'");
    if (seed_opt->count() > 0) cfg.seed = seed;

    int thread_count = 1;
    if (threads_opt->count() > 0)
      thread_count = threads;
    else if (cfg.threads > 0)
      thread_count = cfg.threads;
    else if (const char* env = std::getenv("TORUS_MREG_THREADS"))
      thread_count = std::atoi(env);
    torus_mreg::set_default_thread_count(std::max(thread_count, 1));

    const auto report = torus_mreg::scenarios::run_scenario(cfg);
    nlohmann::json payload = report.payload;
    payload["timestamp"] = utc_timestamp();
    const std::string text = payload.dump(2) + "\n";

    if (out_opt->count() > 0) {
      std::ofstream out(out_path);
      if (!out) throw torus_mreg::Error("cannot write " + out_path);
      out << text;
    } else {
      std::cout << text;
    }
    if (csv) {
      const std::string stem =
          out_opt->count() > 0 ? stem_of(out_path) : cfg.scenario;
      for (const auto& table : report.tables) {
        const std::string path = stem + "-" + table.name + ".csv";
        std::ofstream out(path);
        if (!out) throw torus_mreg::Error("cannot write " + path);
        out << table.text;
        std::cerr << "wrote " << path << "\n";
      }
    }
    for (const auto& f : report.findings)
      std::cerr << "finding: " << f << "\n";
    std::cerr << (report.pass ? "PASS " : "FAIL ") << cfg.scenario << "\n";
    return report.pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
