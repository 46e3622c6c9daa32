#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vtplate/error.hpp"
#include "vtplate/scenario.hpp"

namespace {

int run_solve(const std::string& config_file, const std::string& out_dir,
              const std::string& preset_name, std::optional<double> alpha, int n,
              const std::string& analysis) {
  using namespace vtplate;
  ScenarioConfig cfg;
  try {
    if (!preset_name.empty()) {
      if (!config_file.empty()) throw ConfigError("", "give either a config file or --preset, not both");
      if (!alpha) throw ConfigError("alpha", "--alpha is required with --preset");
      const AnalysisKind kind =
          analysis.empty() ? AnalysisKind::nonlinear_buckling : parse_analysis(analysis);
      cfg = preset(preset_name, *alpha, n, kind);
    } else {
      if (config_file.empty()) throw ConfigError("", "a config file or --preset is required");
      cfg = load_config(config_file);
      if (!analysis.empty()) {
        cfg.analysis = parse_analysis(analysis);
        validate(cfg);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  const ScenarioResult result = run_scenario(cfg);
  const std::string dir = out_dir.empty() ? cfg.output : out_dir;
  try {
    write_outputs(dir, cfg, result);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cout << summary_json(cfg, result).dump(2) << '\n';
  if (!result.converged) {
    std::cerr << "partial path: " << result.message << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear bending and buckling of variable-thickness plates"};
  app.require_subcommand(1);

  std::string config_file, out_dir, preset_name, analysis;
  std::optional<double> alpha;
  int n = 1;
  auto* solve = app.add_subcommand("solve", "Run a scenario and write path.csv and summary.json");
  solve->add_option("config", config_file, "Scenario JSON file");
  solve->add_option("--out", out_dir, "Output directory (default: the config's output field)");
  solve->add_option("--preset", preset_name, "Benchmark preset: 4.1, 4.2, 4.3, 4.4, 4.5-iso, 4.5-crossply");
  solve->add_option("--alpha", alpha, "Tapered ratio or sine amplitude for --preset");
  solve->add_option("--n", n, "Sine wave count for the 4.5 presets")->check(CLI::PositiveNumber);
  solve->add_option("--analysis", analysis, "linear-bending, nonlinear-bending or nonlinear-buckling");

  std::string dump_name, dump_analysis;
  double dump_alpha = 0.0;
  int dump_n = 1;
  auto* dump = app.add_subcommand("preset", "Print a preset scenario as JSON");
  dump->add_option("name", dump_name, "Preset name")->required();
  dump->add_option("--alpha", dump_alpha, "Tapered ratio or sine amplitude")->required();
  dump->add_option("--n", dump_n, "Sine wave count")->check(CLI::PositiveNumber);
  dump->add_option("--analysis", dump_analysis, "Analysis kind");

  CLI11_PARSE(app, argc, argv);

  if (*solve) return run_solve(config_file, out_dir, preset_name, alpha, n, analysis);

  try {
    const auto kind = dump_analysis.empty() ? vtplate::AnalysisKind::nonlinear_buckling
                                            : vtplate::parse_analysis(dump_analysis);
    std::cout << vtplate::to_json(vtplate::preset(dump_name, dump_alpha, dump_n, kind)).dump(2) << '\n';
  } catch (const vtplate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
