#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>

#include "weakflow/picard.hpp"

namespace weakflow {

enum class Scenario {
  Solve,
  Persistence,
  Asymptotics,
  KappaScan,
  Evolve,
  Steadiness,
  Liouville,
  LorentzSelftest,
  Constants,
};

Scenario scenario_from_string(const std::string& name);
std::string scenario_to_string(Scenario scenario);

/// One run's complete configuration. Parsing is strict: unknown keys are
/// rejected and the physical parameters (grid, band, amplitude, seed) carry
/// no defaults.
struct ScenarioConfig {
  Scenario scenario = Scenario::Solve;
  int grid_n = 0;
  double grid_l = 0.0;
  std::uint64_t seed = 0;
  int band_lo = 0;
  int band_hi = 0;
  double amplitude = 0.0;
  bool toy_mode = false;
  double kappa = 1.0;
  SolverConfig solver;
  int probe_count = 40;
  double horizon = 1.0;
  int steps = 64;
  int picard_depth = 3;
  std::string output_dir;

  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

/// Exit status contract: 0 success, 2 informative mathematical failure
/// (reports still written), input errors surface as exceptions for the CLI
/// to map to 1.
int run_scenario(const ScenarioConfig& config, const std::string& out_dir);

}  // namespace weakflow
