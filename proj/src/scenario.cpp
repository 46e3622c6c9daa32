#include "vtplate/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <locale>
#include <numbers>
#include <sstream>
#include <string_view>

#include "vtplate/error.hpp"

namespace vtplate {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (std::string_view k : allowed) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(join(path, item.key()), "unknown field");
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 1e9) return static_cast<int>(v);
  }
  throw ConfigError(field, "expected an integer");
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) throw ConfigError(join(path, key), "required field is missing");
  return *j;
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  const json* j = find(obj, key);
  return j ? number(*j, join(path, key)) : fallback;
}

MaterialSpec parse_material(const json& j) {
  MaterialSpec m;
  std::string type;
  if (j.is_string()) {
    type = j.get<std::string>();
  } else {
    type = text(require(j, "type", "material"), "material.type");
  }
  if (type == "isotropic") {
    m.kind = MaterialKind::isotropic;
    if (j.is_object()) {
      check_keys(j, "material", {"type", "E", "nu"});
      m.e = number_or(j, "E", "material", m.e);
      m.nu = number_or(j, "nu", "material", m.nu);
    }
  } else if (type == "orthotropic") {
    m.kind = MaterialKind::orthotropic;
    if (j.is_object()) {
      check_keys(j, "material", {"type", "E2", "E1_E2", "G12_E2", "G23_E2", "G13_E2", "nu12"});
      m.e2 = number_or(j, "E2", "material", m.e2);
      m.e1_e2 = number_or(j, "E1_E2", "material", m.e1_e2);
      m.g12_e2 = number_or(j, "G12_E2", "material", m.g12_e2);
      m.g23_e2 = number_or(j, "G23_E2", "material", m.g23_e2);
      m.g13_e2 = number_or(j, "G13_E2", "material", m.g12_e2);
      m.nu12 = number_or(j, "nu12", "material", m.nu12);
    }
  } else {
    throw ConfigError("material.type", "expected \"isotropic\" or \"orthotropic\"");
  }
  return m;
}

ThicknessKind thickness_kind(const std::string& s) {
  if (s == "uniform") return ThicknessKind::uniform;
  if (s == "tapered_x") return ThicknessKind::tapered_x;
  if (s == "tapered_diagonal") return ThicknessKind::tapered_diagonal;
  if (s == "sine_wave") return ThicknessKind::sine_wave;
  if (s == "grids") return ThicknessKind::grids;
  throw ConfigError("thickness.type",
                    "expected uniform, tapered_x, tapered_diagonal, sine_wave or grids");
}

const char* to_cstr(ThicknessKind k) {
  switch (k) {
    case ThicknessKind::uniform: return "uniform";
    case ThicknessKind::tapered_x: return "tapered_x";
    case ThicknessKind::tapered_diagonal: return "tapered_diagonal";
    case ThicknessKind::sine_wave: return "sine_wave";
    case ThicknessKind::grids: return "grids";
  }
  return "uniform";
}

ThicknessSpec parse_thickness(const json& j) {
  ThicknessSpec t;
  if (j.is_string()) {
    t.kind = thickness_kind(j.get<std::string>());
    if (t.kind == ThicknessKind::grids) throw ConfigError("thickness.grids", "required field is missing");
    return t;
  }
  check_keys(j, "thickness", {"type", "alpha", "n", "phase_origin", "grids"});
  t.kind = thickness_kind(text(require(j, "type", "thickness"), "thickness.type"));
  t.alpha = number_or(j, "alpha", "thickness", 0.0);
  if (const json* n = find(j, "n")) t.n = integer(*n, "thickness.n");
  if (const json* p = find(j, "phase_origin")) {
    const std::string s = text(*p, "thickness.phase_origin");
    if (s == "edge") t.phase_origin = PhaseOrigin::edge;
    else if (s == "center") t.phase_origin = PhaseOrigin::center;
    else throw ConfigError("thickness.phase_origin", "expected \"edge\" or \"center\"");
  }
  if (t.kind == ThicknessKind::grids) {
    const json& g = require(j, "grids", "thickness");
    if (!g.is_array()) throw ConfigError("thickness.grids", "expected an array per lamina");
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::string field = "thickness.grids[" + std::to_string(k) + "]";
      if (!g[k].is_array()) throw ConfigError(field, "expected an array of control thicknesses");
      std::vector<double> row;
      for (std::size_t c = 0; c < g[k].size(); ++c)
        row.push_back(number(g[k][c], field + "[" + std::to_string(c) + "]"));
      t.grids.push_back(std::move(row));
    }
  }
  return t;
}

BoundaryPreset parse_boundary(const std::string& s) {
  if (s == "clamped-AD") return BoundaryPreset::clamped_ad;
  if (s == "SS1-all") return BoundaryPreset::ss1_all;
  if (s == "SS2-AD-DC") return BoundaryPreset::ss2_ad_dc;
  throw ConfigError("boundary", "expected clamped-AD, SS1-all or SS2-AD-DC");
}

LoadKind parse_load_kind(const std::string& s) {
  if (s == "pressure") return LoadKind::pressure;
  if (s == "uniaxial-x") return LoadKind::uniaxial_x;
  if (s == "uniaxial-y") return LoadKind::uniaxial_y;
  if (s == "biaxial") return LoadKind::biaxial;
  throw ConfigError("load.type", "expected pressure, uniaxial-x, uniaxial-y or biaxial");
}

void resolve_probe(ScenarioConfig& cfg) {
  const double h = 0.5 * cfg.a;
  if (cfg.probe.name == "O") cfg.probe.point = {0.0, 0.0};
  else if (cfg.probe.name == "M") cfg.probe.point = {h, 0.0};
  else if (cfg.probe.name == "B") cfg.probe.point = {h, h};
}

ProbeSpec parse_probe(const json& j) {
  ProbeSpec p;
  if (j.is_string()) {
    p.name = j.get<std::string>();
    if (p.name != "O" && p.name != "M" && p.name != "B" && p.name != "peak")
      throw ConfigError("probe", "expected O, M, B, peak or an [x, y] pair");
  } else if (j.is_array() && j.size() == 2) {
    p.name = "custom";
    p.point = {number(j[0], "probe[0]"), number(j[1], "probe[1]")};
  } else {
    throw ConfigError("probe", "expected O, M, B, peak or an [x, y] pair");
  }
  return p;
}

ScenarioSolver parse_solver(const json& j) {
  check_keys(j, "solver", {"tolerance", "max_iterations", "max_steps", "initial_arc_length",
                           "growth", "shrink", "max_load", "max_deflection", "load_steps"});
  ScenarioSolver s;
  s.tolerance = number_or(j, "tolerance", "solver", s.tolerance);
  if (const json* v = find(j, "max_iterations")) s.max_iterations = integer(*v, "solver.max_iterations");
  if (const json* v = find(j, "max_steps")) s.max_steps = integer(*v, "solver.max_steps");
  s.initial_arc_length = number_or(j, "initial_arc_length", "solver", s.initial_arc_length);
  s.growth = number_or(j, "growth", "solver", s.growth);
  s.shrink = number_or(j, "shrink", "solver", s.shrink);
  if (const json* v = find(j, "max_load")) s.max_load = number(*v, "solver.max_load");
  if (const json* v = find(j, "max_deflection")) s.max_deflection = number(*v, "solver.max_deflection");
  if (const json* v = find(j, "load_steps")) s.load_steps = integer(*v, "solver.load_steps");
  return s;
}

}  // namespace

Point2 mode_peak(const PlateModel& model, const Eigen::VectorXd& mode, double a, int samples) {
  Point2 best{0.0, 0.0};
  double peak = -1.0;
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Point2 p{a * (static_cast<double>(i) / (samples - 1) - 0.5),
                     a * (static_cast<double>(j) / (samples - 1) - 0.5)};
      const double w = std::abs(model.deflection_at(mode, p));
      if (w > peak * (1.0 + 1e-9)) {
        peak = w;
        best = p;
      }
    }
  }
  return best;
}

LaminaMaterial MaterialSpec::lamina() const {
  if (kind == MaterialKind::isotropic) return LaminaMaterial::isotropic(e, nu);
  return LaminaMaterial::from_ratios(e2, e1_e2, g12_e2, g23_e2, g13_e2, nu12);
}

std::string to_string(AnalysisKind k) {
  switch (k) {
    case AnalysisKind::linear_bending: return "linear-bending";
    case AnalysisKind::nonlinear_bending: return "nonlinear-bending";
    case AnalysisKind::nonlinear_buckling: return "nonlinear-buckling";
  }
  return "";
}

std::string to_string(BoundaryPreset b) {
  switch (b) {
    case BoundaryPreset::clamped_ad: return "clamped-AD";
    case BoundaryPreset::ss1_all: return "SS1-all";
    case BoundaryPreset::ss2_ad_dc: return "SS2-AD-DC";
  }
  return "";
}

std::string to_string(LoadKind l) {
  switch (l) {
    case LoadKind::pressure: return "pressure";
    case LoadKind::uniaxial_x: return "uniaxial-x";
    case LoadKind::uniaxial_y: return "uniaxial-y";
    case LoadKind::biaxial: return "biaxial";
  }
  return "";
}

AnalysisKind parse_analysis(const std::string& s) {
  if (s == "linear-bending") return AnalysisKind::linear_bending;
  if (s == "nonlinear-bending") return AnalysisKind::nonlinear_bending;
  if (s == "nonlinear-buckling") return AnalysisKind::nonlinear_buckling;
  throw ConfigError("analysis", "expected linear-bending, nonlinear-bending or nonlinear-buckling");
}

ScenarioConfig parse_config(const json& doc) {
  check_keys(doc, "", {"schema", "name", "geometry", "material", "layup", "thickness", "mesh",
                       "boundary", "load", "analysis", "shear_correction", "imperfection",
                       "imperfection_shear", "probe", "solver", "output"});
  ScenarioConfig cfg;
  if (const json* s = find(doc, "schema")) {
    cfg.schema = integer(*s, "schema");
    if (cfg.schema != 1) throw ConfigError("schema", "unsupported schema version");
  }
  if (const json* s = find(doc, "name")) cfg.name = text(*s, "name");

  const json& geo = require(doc, "geometry", "");
  check_keys(geo, "geometry", {"a", "h"});
  cfg.a = number(require(geo, "a", "geometry"), "geometry.a");
  cfg.h_bar = number(require(geo, "h", "geometry"), "geometry.h");

  cfg.material = parse_material(require(doc, "material", ""));

  if (const json* l = find(doc, "layup")) {
    if (!l->is_array()) throw ConfigError("layup", "expected an array of ply angles in degrees");
    cfg.layup.clear();
    for (std::size_t k = 0; k < l->size(); ++k)
      cfg.layup.push_back(number((*l)[k], "layup[" + std::to_string(k) + "]"));
  }
  if (const json* t = find(doc, "thickness")) cfg.thickness = parse_thickness(*t);
  if (const json* m = find(doc, "mesh")) {
    check_keys(*m, "mesh", {"elements", "degree"});
    if (const json* e = find(*m, "elements")) cfg.elements = integer(*e, "mesh.elements");
    if (const json* d = find(*m, "degree")) cfg.degree = integer(*d, "mesh.degree");
  }
  cfg.boundary = parse_boundary(text(require(doc, "boundary", ""), "boundary"));

  const json& load = require(doc, "load", "");
  if (load.is_string()) {
    cfg.load = parse_load_kind(load.get<std::string>());
  } else {
    check_keys(load, "load", {"type", "reference"});
    cfg.load = parse_load_kind(text(require(load, "type", "load"), "load.type"));
    cfg.reference_load = number_or(load, "reference", "load", cfg.reference_load);
  }
  cfg.analysis = parse_analysis(text(require(doc, "analysis", ""), "analysis"));
  cfg.shear_correction = number_or(doc, "shear_correction", "", cfg.shear_correction);
  cfg.imperfection = number_or(doc, "imperfection", "", cfg.imperfection);
  if (const json* s = find(doc, "imperfection_shear")) {
    const std::string v = text(*s, "imperfection_shear");
    if (v == "stress_free") cfg.imperfection_shear = ImperfectionShear::stress_free;
    else if (v == "included") cfg.imperfection_shear = ImperfectionShear::included;
    else throw ConfigError("imperfection_shear", "expected \"stress_free\" or \"included\"");
  }
  if (const json* p = find(doc, "probe")) {
    cfg.probe = parse_probe(*p);
  } else {
    const bool bending = cfg.analysis != AnalysisKind::nonlinear_buckling;
    cfg.probe.name = bending && cfg.boundary == BoundaryPreset::clamped_ad ? "M"
                     : bending && cfg.boundary == BoundaryPreset::ss2_ad_dc ? "B"
                                                                            : "O";
  }
  resolve_probe(cfg);
  if (const json* s = find(doc, "solver")) cfg.solver = parse_solver(*s);
  if (const json* o = find(doc, "output")) cfg.output = text(*o, "output");

  validate(cfg);
  return cfg;
}

ScenarioConfig parse_config(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open " + file.string());
  return parse_config(in);
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["schema"] = cfg.schema;
  if (!cfg.name.empty()) j["name"] = cfg.name;
  j["geometry"] = {{"a", cfg.a}, {"h", cfg.h_bar}};
  if (cfg.material.kind == MaterialKind::isotropic) {
    j["material"] = {{"type", "isotropic"}, {"E", cfg.material.e}, {"nu", cfg.material.nu}};
  } else {
    j["material"] = {{"type", "orthotropic"},         {"E2", cfg.material.e2},
                     {"E1_E2", cfg.material.e1_e2},   {"G12_E2", cfg.material.g12_e2},
                     {"G23_E2", cfg.material.g23_e2}, {"G13_E2", cfg.material.g13_e2},
                     {"nu12", cfg.material.nu12}};
  }
  j["layup"] = cfg.layup;
  json t = {{"type", to_cstr(cfg.thickness.kind)}};
  switch (cfg.thickness.kind) {
    case ThicknessKind::uniform: break;
    case ThicknessKind::tapered_x:
    case ThicknessKind::tapered_diagonal: t["alpha"] = cfg.thickness.alpha; break;
    case ThicknessKind::sine_wave:
      t["alpha"] = cfg.thickness.alpha;
      t["n"] = cfg.thickness.n;
      t["phase_origin"] = cfg.thickness.phase_origin == PhaseOrigin::edge ? "edge" : "center";
      break;
    case ThicknessKind::grids: t["grids"] = cfg.thickness.grids; break;
  }
  j["thickness"] = t;
  j["mesh"] = {{"elements", cfg.elements}, {"degree", cfg.degree}};
  j["boundary"] = to_string(cfg.boundary);
  j["load"] = {{"type", to_string(cfg.load)}, {"reference", cfg.reference_load}};
  j["analysis"] = to_string(cfg.analysis);
  j["shear_correction"] = cfg.shear_correction;
  j["imperfection"] = cfg.imperfection;
  j["imperfection_shear"] =
      cfg.imperfection_shear == ImperfectionShear::stress_free ? "stress_free" : "included";
  if (cfg.probe.name == "custom") j["probe"] = {cfg.probe.point.x, cfg.probe.point.y};
  else j["probe"] = cfg.probe.name;
  json s = {{"tolerance", cfg.solver.tolerance},
            {"max_iterations", cfg.solver.max_iterations},
            {"max_steps", cfg.solver.max_steps},
            {"initial_arc_length", cfg.solver.initial_arc_length},
            {"growth", cfg.solver.growth},
            {"shrink", cfg.solver.shrink},
            {"load_steps", cfg.solver.load_steps}};
  if (cfg.solver.max_load) s["max_load"] = *cfg.solver.max_load;
  if (cfg.solver.max_deflection) s["max_deflection"] = *cfg.solver.max_deflection;
  j["solver"] = s;
  j["output"] = cfg.output;
  return j;
}

ThicknessFunction thickness_function(const ScenarioConfig& cfg) {
  const double a = cfg.a, h = cfg.h_bar, alpha = cfg.thickness.alpha;
  switch (cfg.thickness.kind) {
    case ThicknessKind::uniform: return [h](double, double) { return h; };
    case ThicknessKind::tapered_x: return tapered_x(a, h, alpha);
    case ThicknessKind::tapered_diagonal: return tapered_diagonal(a, h, alpha);
    case ThicknessKind::sine_wave: {
      const double x0 = cfg.thickness.phase_origin == PhaseOrigin::edge ? -0.5 * a : 0.0;
      return sine_wave(a, h, alpha, cfg.thickness.n, x0);
    }
    case ThicknessKind::grids: break;
  }
  throw DomainError("explicit thickness grids have no analytic form");
}

void validate(ScenarioConfig& cfg) {
  cfg.warnings.clear();
  if (!(cfg.a > 0.0)) throw ConfigError("geometry.a", "must be positive");
  if (!(cfg.h_bar > 0.0)) throw ConfigError("geometry.h", "must be positive");
  if (cfg.elements < 1) throw ConfigError("mesh.elements", "must be at least 1");
  if (cfg.degree != 2) throw ConfigError("mesh.degree", "only quadratic meshes (degree 2) are supported");
  if (cfg.layup.empty()) throw ConfigError("layup", "needs at least one ply");
  try {
    cfg.material.lamina().validate();
  } catch (const MaterialError& e) {
    throw ConfigError("material", e.what());
  }
  if (!(cfg.shear_correction > 0.0)) throw ConfigError("shear_correction", "must be positive");
  if (!(cfg.imperfection >= 0.0)) throw ConfigError("imperfection", "must be non-negative");
  if (!(cfg.reference_load > 0.0)) throw ConfigError("load.reference", "must be positive");

  const ScenarioSolver& s = cfg.solver;
  if (!(s.tolerance > 0.0)) throw ConfigError("solver.tolerance", "must be positive");
  if (s.max_iterations < 1) throw ConfigError("solver.max_iterations", "must be at least 1");
  if (s.max_steps < 1) throw ConfigError("solver.max_steps", "must be at least 1");
  if (!(s.initial_arc_length >= 0.0)) throw ConfigError("solver.initial_arc_length", "must be non-negative");
  if (!(s.growth >= 1.0)) throw ConfigError("solver.growth", "must be at least 1");
  if (!(s.shrink > 0.0 && s.shrink < 1.0)) throw ConfigError("solver.shrink", "must lie in (0, 1)");
  if (s.max_load && !(*s.max_load > 0.0)) throw ConfigError("solver.max_load", "must be positive");
  if (s.max_deflection && !(*s.max_deflection > 0.0))
    throw ConfigError("solver.max_deflection", "must be positive");
  if (s.load_steps < 1) throw ConfigError("solver.load_steps", "must be at least 1");

  const bool buckling = cfg.analysis == AnalysisKind::nonlinear_buckling;
  if (buckling && cfg.load == LoadKind::pressure)
    throw ConfigError("load", "buckling needs an in-plane edge load");
  if (!buckling && cfg.load != LoadKind::pressure)
    throw ConfigError("load", "bending analyses need a pressure load");

  if (cfg.probe.name == "peak" && !buckling)
    throw ConfigError("probe", "the mode peak is only defined for buckling analyses");
  const double half = 0.5 * cfg.a;
  if (std::abs(cfg.probe.point.x) > half || std::abs(cfg.probe.point.y) > half)
    throw ConfigError("probe", "point lies outside the plate");

  const ThicknessSpec& t = cfg.thickness;
  if (t.kind == ThicknessKind::grids) {
    const std::size_t count = static_cast<std::size_t>((cfg.elements + cfg.degree) * (cfg.elements + cfg.degree));
    if (t.grids.size() != cfg.layup.size())
      throw ConfigError("thickness.grids", "needs one grid per ply");
    for (std::size_t k = 0; k < t.grids.size(); ++k) {
      const std::string field = "thickness.grids[" + std::to_string(k) + "]";
      if (t.grids[k].size() != count)
        throw ConfigError(field, "needs " + std::to_string(count) + " control thicknesses");
      for (double v : t.grids[k])
        if (!(v > 0.0)) throw ConfigError(field, "control thicknesses must be positive");
    }
  } else {
    if (t.kind == ThicknessKind::sine_wave && t.n < 1)
      throw ConfigError("thickness.n", "wave count must be at least 1");
    try {
      const ThicknessFunction h = thickness_function(cfg);
      if (!(sampled_minimum(h, cfg.a) > 0.0))
        throw ConfigError("thickness.alpha", "thickness is not positive over the plate");
    } catch (const ParameterError& e) {
      throw ConfigError("thickness.alpha", e.what());
    }
    if (t.kind == ThicknessKind::sine_wave && t.alpha != 0.0 && cfg.elements < 12) {
      std::ostringstream os;
      os << "sine-wave thickness (n = " << t.n << ") on a " << cfg.elements << "x"
         << cfg.elements << " mesh may be under-resolved; 12x12 elements are advised";
      cfg.warnings.push_back(os.str());
    }
  }
}

std::vector<std::string> preset_names() {
  return {"4.1", "4.2", "4.3", "4.4", "4.5-iso", "4.5-crossply"};
}

ScenarioConfig preset(const std::string& name, double alpha, int n, AnalysisKind analysis) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.analysis = analysis;
  const bool bending = analysis != AnalysisKind::nonlinear_buckling;
  const MaterialSpec composite{.kind = MaterialKind::orthotropic};
  if (name == "4.1" || name == "4.3") {
    cfg.a = 10.0;
    cfg.h_bar = 0.2;
    if (name == "4.3") {
      cfg.material = composite;
      cfg.layup = {0.0, 90.0, 90.0, 0.0};
    }
    cfg.thickness.kind = ThicknessKind::tapered_x;
    cfg.thickness.alpha = alpha;
    cfg.boundary = bending ? BoundaryPreset::clamped_ad : BoundaryPreset::ss1_all;
    cfg.load = bending ? LoadKind::pressure : LoadKind::uniaxial_x;
    cfg.probe.name = bending ? "M" : "O";
  } else if (name == "4.2" || name == "4.4") {
    cfg.a = 10.0;
    cfg.h_bar = 0.2;
    if (name == "4.4") {
      cfg.material = composite;
      cfg.layup = {45.0, -45.0, -45.0, 45.0};
    }
    cfg.thickness.kind = ThicknessKind::tapered_diagonal;
    cfg.thickness.alpha = alpha;
    cfg.boundary = bending ? BoundaryPreset::ss2_ad_dc : BoundaryPreset::ss1_all;
    cfg.load = bending ? LoadKind::pressure : LoadKind::biaxial;
    cfg.probe.name = bending ? "B" : "O";
  } else if (name == "4.5-iso" || name == "4.5-crossply") {
    if (bending) throw ConfigError("analysis", "preset " + name + " is a buckling benchmark");
    cfg.a = 10.0;
    cfg.h_bar = 0.5;
    if (name == "4.5-crossply") {
      cfg.material = composite;
      cfg.layup = {0.0, 90.0, 90.0, 0.0};
    }
    cfg.thickness.kind = ThicknessKind::sine_wave;
    cfg.thickness.alpha = alpha;
    cfg.thickness.n = n;
    cfg.elements = alpha == 0.0 ? 6 : 12;
    cfg.boundary = BoundaryPreset::ss1_all;
    cfg.load = LoadKind::uniaxial_y;
    cfg.probe.name = "peak";
  } else {
    throw ConfigError("preset", "unknown preset \"" + name + "\"");
  }
  resolve_probe(cfg);
  validate(cfg);
  return cfg;
}

Normalization normalization(const ScenarioConfig& cfg) {
  Normalization out;
  out.length_unit = cfg.h_bar;
  const double a2 = cfg.a * cfg.a;
  const double h = cfg.h_bar;
  const bool pressure = cfg.load == LoadKind::pressure;
  if (cfg.material.kind == MaterialKind::isotropic) {
    const double e = cfg.material.e, nu = cfg.material.nu;
    const double d_bar = e * h * h * h / (12.0 * (1.0 - nu * nu));
    out.load_unit = pressure ? e * h * h * h * h / (a2 * a2)
                             : std::numbers::pi * std::numbers::pi * d_bar / a2;
  } else {
    const double e2 = cfg.material.e2;
    out.load_unit = pressure ? e2 * h * h * h * h / (a2 * a2) : e2 * h * h * h / a2;
  }
  return out;
}

PlateModel build_model(const ScenarioConfig& cfg) {
  const double half = 0.5 * cfg.a;
  Patch2D patch = Patch2D::rectangle(-half, half, -half, half, cfg.elements, cfg.elements, cfg.degree);
  const int plies = static_cast<int>(cfg.layup.size());
  ThicknessField field = cfg.thickness.kind == ThicknessKind::grids
                             ? ThicknessField(patch, cfg.thickness.grids)
                             : fit_equal_plies(patch, thickness_function(cfg), plies);
  PlateOptions opt;
  opt.shear_correction = cfg.shear_correction;
  opt.imperfection_shear = cfg.imperfection_shear;
  PlateModel model(std::move(patch), std::move(field), Layup(cfg.material.lamina(), cfg.layup), opt);
  switch (cfg.boundary) {
    case BoundaryPreset::clamped_ad: {
      const Edge e[] = {Edge::AD};
      model.apply_bc(Support::clamped, e);
      break;
    }
    case BoundaryPreset::ss1_all: {
      const Edge e[] = {Edge::AD, Edge::BC, Edge::AB, Edge::CD};
      model.apply_bc(Support::ss1, e);
      model.suppress_in_plane_rigid_motion();
      break;
    }
    case BoundaryPreset::ss2_ad_dc: {
      const Edge e[] = {Edge::AD, Edge::CD};
      model.apply_bc(Support::ss2, e);
      break;
    }
  }
  return model;
}

LoadCase reference_load_case(const ScenarioConfig& cfg) {
  const double f = normalization(cfg).raw_load(cfg.reference_load);
  switch (cfg.load) {
    case LoadKind::pressure: return {f, 0.0, 0.0};
    case LoadKind::uniaxial_x: return {0.0, f, 0.0};
    case LoadKind::uniaxial_y: return {0.0, 0.0, f};
    case LoadKind::biaxial: return {0.0, f, f};
  }
  return {};
}

ScenarioResult run_scenario(const ScenarioConfig& input) {
  ScenarioConfig cfg = input;
  validate(cfg);
  ScenarioResult out;
  out.analysis = cfg.analysis;
  out.warnings = cfg.warnings;
  out.norm = normalization(cfg);
  out.probe = cfg.probe.point;
  out.reference_load = cfg.reference_load;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.linear_critical_load = out.critical_load_threshold = out.critical_load_plateau = nan;

  PlateModel model = build_model(cfg);
  out.volume = model.thickness().volume();
  const LoadCase ref = reference_load_case(cfg);
  const double h = cfg.h_bar;

  SolverSettings settings;
  settings.tolerance = cfg.solver.tolerance;
  settings.max_iterations = cfg.solver.max_iterations;
  settings.max_steps = cfg.solver.max_steps;
  settings.initial_arc_length = cfg.solver.initial_arc_length;
  settings.growth = cfg.solver.growth;
  settings.shrink = cfg.solver.shrink;
  settings.probe_target = 1e-2 * h;
  if (cfg.solver.max_deflection) settings.max_probe = *cfg.solver.max_deflection * h;

  try {
    if (cfg.analysis == AnalysisKind::linear_bending) {
      const PlateEquilibrium problem(model, ref, cfg.probe.point);
      out.dofs = static_cast<int>(problem.size());
      const Eigen::VectorXd unit = problem.reduce(linear_bending(model, ref));
      const double top = cfg.solver.max_load.value_or(cfg.reference_load) / cfg.reference_load;
      const int steps = cfg.solver.load_steps;
      for (int k = 1; k <= steps; ++k) {
        const double lambda = top * k / steps;
        Eigen::VectorXd state = lambda * unit;
        const double w = problem.probe(state);
        out.path.records.push_back({k, lambda, std::move(state), w, 1});
      }
      out.path.message = "linear response";
    } else if (cfg.analysis == AnalysisKind::nonlinear_bending) {
      const PlateEquilibrium problem(model, ref, cfg.probe.point);
      out.dofs = static_cast<int>(problem.size());
      settings.max_load = cfg.solver.max_load.value_or(cfg.reference_load) / cfg.reference_load;
      out.path = riks_trace(problem, settings);
    } else {
      const PlateBuckling lb = plate_linear_buckling(model, ref);
      out.linear_critical_load = lb.load_factor * cfg.reference_load;
      if (cfg.probe.name == "peak") cfg.probe.point = mode_peak(model, lb.mode, cfg.a);
      if (cfg.imperfection > 0.0) seed_imperfection(model, lb.mode, cfg.imperfection, cfg.a);
      out.probe = cfg.probe.point;
      const PlateEquilibrium problem(model, ref, cfg.probe.point);
      out.dofs = static_cast<int>(problem.size());
      settings.max_initial_load_increment = 0.1 * lb.load_factor;
      settings.max_load = cfg.solver.max_load
                              ? *cfg.solver.max_load / cfg.reference_load
                              : 1.5 * lb.load_factor;
      settings.max_probe = cfg.solver.max_deflection.value_or(1.0) * h;
      out.path = riks_trace(problem, settings);
      out.critical_load_threshold =
          critical_load_threshold(out.path, 0.05 * h) * cfg.reference_load;
      out.critical_load_plateau = critical_load_plateau(out.path) * cfg.reference_load;
    }
    out.converged = out.path.complete;
    out.message = out.path.message;
  } catch (const Error& e) {
    out.converged = false;
    out.message = e.what();
  }
  if (!out.path.records.empty()) out.final_deflection = out.norm.deflection(out.path.records.back().probe);
  return out;
}

void write_path_csv(std::ostream& out, const ScenarioResult& result) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "step,lambda,load_normalized,w_probe,w_normalized,iterations\n";
  for (const PathRecord& r : result.path.records) {
    os << r.step << ',' << r.lambda << ',' << r.lambda * result.reference_load << ',' << r.probe
       << ',' << result.norm.deflection(r.probe) << ',' << r.iterations << '\n';
  }
  out << os.str();
}

void emit_path(const std::filesystem::path& file, const ScenarioResult& result) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  write_path_csv(out, result);
  if (!out) throw Error("write failed for " + file.string());
}

json summary_json(const ScenarioConfig& cfg, const ScenarioResult& result) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["name"] = cfg.name;
  j["analysis"] = to_string(result.analysis);
  j["critical_load_threshold"] = finite_or_null(result.critical_load_threshold);
  j["critical_load_plateau"] = finite_or_null(result.critical_load_plateau);
  j["linear_critical_load"] = finite_or_null(result.linear_critical_load);
  j["final_deflection"] = result.final_deflection;
  j["probe"] = {result.probe.x, result.probe.y};
  j["steps"] = result.path.records.size();
  j["converged"] = result.converged;
  j["message"] = result.message;
  j["volume"] = result.volume;
  j["dofs"] = result.dofs;
  j["warnings"] = result.warnings;
  return j;
}

void write_outputs(const std::filesystem::path& directory, const ScenarioConfig& cfg,
                   const ScenarioResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error("cannot create " + directory.string() + ": " + ec.message());
  emit_path(directory / "path.csv", result);
  const std::filesystem::path summary = directory / "summary.json";
  std::ofstream out(summary, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + summary.string());
  out << summary_json(cfg, result).dump(2) << '\n';
  if (!out) throw Error("write failed for " + summary.string());
}

}  // namespace vtplate
