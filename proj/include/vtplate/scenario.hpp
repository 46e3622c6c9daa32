#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtplate/plate_model.hpp"
#include "vtplate/solvers.hpp"

namespace vtplate {

enum class MaterialKind { isotropic, orthotropic };

struct MaterialSpec {
  MaterialKind kind = MaterialKind::isotropic;
  double e = 3.0e6;  // isotropic
  double nu = 0.25;
  double e2 = 1.0;   // orthotropic, ratios to E2
  double e1_e2 = 25.0;
  double g12_e2 = 0.5;
  double g23_e2 = 0.2;
  double g13_e2 = 0.5;
  double nu12 = 0.25;

  LaminaMaterial lamina() const;
};

enum class ThicknessKind { uniform, tapered_x, tapered_diagonal, sine_wave, grids };
enum class PhaseOrigin { edge, center };

struct ThicknessSpec {
  ThicknessKind kind = ThicknessKind::uniform;
  double alpha = 0.0;
  int n = 1;
  PhaseOrigin phase_origin = PhaseOrigin::edge;  // sine wave crest at x = -a/2 or x = 0
  std::vector<std::vector<double>> grids;        // per lamina, patch control ordering
};

enum class BoundaryPreset { clamped_ad, ss1_all, ss2_ad_dc };
enum class LoadKind { pressure, uniaxial_x, uniaxial_y, biaxial };
enum class AnalysisKind { linear_bending, nonlinear_bending, nonlinear_buckling };

struct ProbeSpec {
  std::string name = "O";  // O, M, B, "peak" (largest mode deflection) or "custom"
  Point2 point{0.0, 0.0};
};

struct ScenarioSolver {
  double tolerance = 1e-3;
  int max_iterations = 25;
  int max_steps = 200;
  double initial_arc_length = 0.0;
  double growth = 1.5;
  double shrink = 0.5;
  std::optional<double> max_load;        // normalized
  std::optional<double> max_deflection;  // |w| / h_bar
  int load_steps = 10;                   // linear bending
};

struct ScenarioConfig {
  int schema = 1;
  std::string name;
  double a = 10.0;
  double h_bar = 0.2;
  MaterialSpec material;
  std::vector<double> layup{0.0};
  ThicknessSpec thickness;
  int elements = 6;
  int degree = 2;
  BoundaryPreset boundary = BoundaryPreset::ss1_all;
  LoadKind load = LoadKind::uniaxial_x;
  double reference_load = 1.0;  // normalized magnitude of the reference load
  AnalysisKind analysis = AnalysisKind::nonlinear_buckling;
  double shear_correction = 5.0 / 6.0;
  double imperfection = 1e-5;
  ImperfectionShear imperfection_shear = ImperfectionShear::stress_free;
  ProbeSpec probe;
  ScenarioSolver solver;
  std::string output = "out";

  std::vector<std::string> warnings;  // filled by validation
};

/// Reads a JSON scenario. Throws ConfigError naming the offending field.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& file);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Physical admissibility. Throws ConfigError; appends advisory warnings to cfg.warnings.
void validate(ScenarioConfig& cfg);

/// Benchmark presets "4.1", "4.2", "4.3", "4.4", "4.5-iso", "4.5-crossply".
ScenarioConfig preset(const std::string& name, double alpha, int n = 1,
                      AnalysisKind analysis = AnalysisKind::nonlinear_buckling);
std::vector<std::string> preset_names();

/// Conversion between raw and normalized load / deflection.
struct Normalization {
  double load_unit = 1.0;  // raw load per unit normalized load
  double length_unit = 1.0;

  double load(double raw) const { return raw / load_unit; }
  double raw_load(double normalized) const { return normalized * load_unit; }
  double deflection(double raw) const { return raw / length_unit; }
  double raw_deflection(double normalized) const { return normalized * length_unit; }
};

/// Uses the uniform-thickness rigidity E h^3 / (12 (1 - nu^2)) for isotropic edge loads.
Normalization normalization(const ScenarioConfig& cfg);

/// Location of the largest |w| of `mode` on a samples x samples grid over the plate.
Point2 mode_peak(const PlateModel& model, const Eigen::VectorXd& mode, double a, int samples = 41);

ThicknessFunction thickness_function(const ScenarioConfig& cfg);
/// Patch, fitted thickness, layup and supports of the scenario.
PlateModel build_model(const ScenarioConfig& cfg);
/// Reference load case for lambda = 1.
LoadCase reference_load_case(const ScenarioConfig& cfg);

struct ScenarioResult {
  AnalysisKind analysis = AnalysisKind::nonlinear_buckling;
  EquilibriumPath path;
  Normalization norm;
  double reference_load = 1.0;
  double linear_critical_load = 0.0;  // normalized, buckling only
  double critical_load_threshold = 0.0;
  double critical_load_plateau = 0.0;
  double final_deflection = 0.0;  // normalized
  Point2 probe;  // resolved probe location
  double volume = 0.0;
  int dofs = 0;
  bool converged = true;
  std::string message;
  std::vector<std::string> warnings;
};

/// Runs the configured analysis. Solver failures end the path early with converged = false.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// CSV `step,lambda,load_normalized,w_probe,w_normalized,iterations`.
void write_path_csv(std::ostream& out, const ScenarioResult& result);
void emit_path(const std::filesystem::path& file, const ScenarioResult& result);
nlohmann::json summary_json(const ScenarioConfig& cfg, const ScenarioResult& result);
/// Writes path.csv and summary.json under `directory`.
void write_outputs(const std::filesystem::path& directory, const ScenarioConfig& cfg,
                   const ScenarioResult& result);

std::string to_string(AnalysisKind k);
std::string to_string(BoundaryPreset b);
std::string to_string(LoadKind l);
AnalysisKind parse_analysis(const std::string& s);

}  // namespace vtplate
