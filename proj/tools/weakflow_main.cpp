#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "weakflow/report.hpp"
#include "weakflow/scenario.hpp"

using nlohmann::json;

namespace {

int run_compare(const std::string& dir_a, const std::string& dir_b,
                const std::string& tolerances_path, const std::string& out) {
  json spec = json::object();
  if (!tolerances_path.empty()) {
    std::ifstream in(tolerances_path);
    if (!in) throw std::invalid_argument("cannot open " + tolerances_path);
    in >> spec;
  }
  const weakflow::DiffReport report =
      weakflow::compare_reports(dir_a, dir_b, spec);
  json out_json{{"compared_files", report.compared_files},
                {"violations", json::array()}};
  for (const auto& v : report.violations)
    out_json["violations"].push_back(json{{"file", v.file},
                                          {"location", v.location},
                                          {"a", v.a},
                                          {"b", v.b},
                                          {"relative", v.relative},
                                          {"tolerance", v.tolerance}});
  if (out.empty()) {
    std::cout << out_json.dump(2) << "\n";
  } else {
    std::ofstream os(out);
    os << out_json.dump(2) << "\n";
  }
  return report.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakflow: steady Boussinesq fixed-point solver and "
               "verification suite"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::int64_t seed_override = -1;
  const std::vector<std::string> scenarios = {
      "solve",     "persistence", "asymptotics",      "kappa-scan", "evolve",
      "steadiness", "liouville",  "lorentz-selftest", "constants"};
  for (const auto& name : scenarios) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", config_path, "scenario config (JSON)")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed_override, "data seed override");
  }

  std::string cmp_a, cmp_b, cmp_tol, cmp_out;
  CLI::App* cmp =
      app.add_subcommand("compare", "diff two report directories");
  cmp->add_option("--a", cmp_a, "first run directory")->required();
  cmp->add_option("--b", cmp_b, "second run directory")->required();
  cmp->add_option("--tolerances", cmp_tol, "per-column tolerance spec (JSON)");
  cmp->add_option("--out", cmp_out, "write the diff report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmp->parsed()) return run_compare(cmp_a, cmp_b, cmp_tol, cmp_out);

    const std::string name = app.get_subcommands().front()->get_name();
    weakflow::ScenarioConfig config = weakflow::ScenarioConfig::load(config_path);
    if (weakflow::scenario_to_string(config.scenario) != name)
      throw std::invalid_argument("config scenario '" +
                                  weakflow::scenario_to_string(config.scenario) +
                                  "' does not match subcommand '" + name + "'");
    if (seed_override >= 0)
      config.seed = static_cast<std::uint64_t>(seed_override);
    return weakflow::run_scenario(config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "weakflow: error: " << e.what() << "\n";
    return 1;
  }
}
