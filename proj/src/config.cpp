#include "fracsim/config.hpp"

#include <fstream>
#include <set>

namespace fracsim {

using nlohmann::json;

namespace {

void expect_keys(const json& j, const std::string& where,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void get_if_present(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  expect_keys(j, "config root",
              {"scenario", "scheme", "grid", "rock", "fluid", "wells", "time",
               "error_norms", "initial_pressure_psi", "output_dir"});

  std::string kind_name = "spontaneous";
  get_if_present(j, "scenario", kind_name);
  ScenarioConfig cfg;
  if (kind_name == "spontaneous") {
    cfg = default_spontaneous();
  } else if (kind_name == "forced") {
    cfg = default_forced();
  } else {
    throw ConfigError("unknown scenario '" + kind_name +
                      "' (expected spontaneous or forced)");
  }

  if (j.contains("scheme")) cfg.scheme = parse_scheme(j.at("scheme").get<std::string>());

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    expect_keys(g, "grid",
                {"n_matrix", "n_fracture", "length_m", "area_m2", "tilt_deg",
                 "fracture_pv_multiplier"});
    get_if_present(g, "n_matrix", cfg.n_matrix);
    cfg.n_fracture = cfg.n_matrix;  // refined at the same rate by default
    get_if_present(g, "n_fracture", cfg.n_fracture);
    get_if_present(g, "length_m", cfg.length_m);
    get_if_present(g, "area_m2", cfg.area_m2);
    get_if_present(g, "tilt_deg", cfg.tilt_deg);
    get_if_present(g, "fracture_pv_multiplier", cfg.fracture_pv_multiplier);
  }
  if (j.contains("rock")) {
    const json& r = j.at("rock");
    expect_keys(r, "rock", {"matrix", "fracture"});
    if (r.contains("matrix")) {
      const json& m = r.at("matrix");
      expect_keys(m, "rock.matrix",
                  {"permeability_md", "porosity", "relperm_exponent",
                   "entry_pressure_psi", "pc_exponent", "pc_max_psi",
                   "pc_min_psi"});
      get_if_present(m, "permeability_md", cfg.matrix_perm_md);
      get_if_present(m, "porosity", cfg.matrix_porosity);
      get_if_present(m, "relperm_exponent", cfg.matrix_relperm_exponent);
      get_if_present(m, "entry_pressure_psi", cfg.entry_pressure_psi);
      get_if_present(m, "pc_exponent", cfg.pc_exponent);
      get_if_present(m, "pc_max_psi", cfg.pc_max_psi);
      get_if_present(m, "pc_min_psi", cfg.pc_min_psi);
    }
    if (r.contains("fracture")) {
      const json& f = r.at("fracture");
      expect_keys(f, "rock.fracture",
                  {"permeability_md", "porosity", "relperm_exponent",
                   "pc_max_psi"});
      get_if_present(f, "permeability_md", cfg.fracture_perm_md);
      get_if_present(f, "porosity", cfg.fracture_porosity);
      get_if_present(f, "relperm_exponent", cfg.fracture_relperm_exponent);
      get_if_present(f, "pc_max_psi", cfg.fracture_pc_max_psi);
    }
  }
  if (j.contains("fluid")) {
    const json& f = j.at("fluid");
    expect_keys(f, "fluid",
                {"viscosity_w_cp", "viscosity_n_cp", "density_w_kg_m3",
                 "density_n_kg_m3"});
    get_if_present(f, "viscosity_w_cp", cfg.viscosity_w_cp);
    get_if_present(f, "viscosity_n_cp", cfg.viscosity_n_cp);
    get_if_present(f, "density_w_kg_m3", cfg.density_w_kg_m3);
    get_if_present(f, "density_n_kg_m3", cfg.density_n_kg_m3);
  }
  if (j.contains("wells")) {
    const json& w = j.at("wells");
    expect_keys(w, "wells",
                {"injection_rate_m3_per_s", "producer_bhp_psi",
                 "producer_wi_factor"});
    get_if_present(w, "injection_rate_m3_per_s", cfg.injection_rate_m3_per_s);
    get_if_present(w, "producer_bhp_psi", cfg.producer_bhp_psi);
    get_if_present(w, "producer_wi_factor", cfg.producer_wi_factor);
  }
  if (j.contains("time")) {
    const json& t = j.at("time");
    expect_keys(t, "time",
                {"end", "dt_init", "dt_max", "dt_growth", "dt_cut",
                 "max_newton", "max_cuts", "newton_tol", "report"});
    get_if_present(t, "end", cfg.end_time);
    get_if_present(t, "dt_init", cfg.dt_init);
    get_if_present(t, "dt_max", cfg.dt_max);
    get_if_present(t, "dt_growth", cfg.dt_growth);
    get_if_present(t, "dt_cut", cfg.dt_cut);
    get_if_present(t, "max_newton", cfg.max_newton);
    get_if_present(t, "max_cuts", cfg.max_cuts);
    get_if_present(t, "newton_tol", cfg.newton_tol);
    get_if_present(t, "report", cfg.report_times);
  }
  if (j.contains("error_norms")) {
    const json& e = j.at("error_norms");
    expect_keys(e, "error_norms", {"sample_lo", "sample_hi", "samples"});
    get_if_present(e, "sample_lo", cfg.error_sample_lo);
    get_if_present(e, "sample_hi", cfg.error_sample_hi);
    get_if_present(e, "samples", cfg.error_samples);
  }
  get_if_present(j, "initial_pressure_psi", cfg.initial_pressure_psi);
  get_if_present(j, "output_dir", cfg.output_dir);

  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = c.kind == ScenarioConfig::Kind::spontaneous ? "spontaneous" : "forced";
  j["scheme"] = scheme_name(c.scheme);
  j["grid"] = {{"n_matrix", c.n_matrix},
               {"n_fracture", c.n_fracture},
               {"length_m", c.length_m},
               {"area_m2", c.area_m2},
               {"tilt_deg", c.tilt_deg},
               {"fracture_pv_multiplier", c.fracture_pv_multiplier}};
  j["rock"]["matrix"] = {{"permeability_md", c.matrix_perm_md},
                         {"porosity", c.matrix_porosity},
                         {"relperm_exponent", c.matrix_relperm_exponent},
                         {"entry_pressure_psi", c.entry_pressure_psi},
                         {"pc_exponent", c.pc_exponent},
                         {"pc_max_psi", c.pc_max_psi},
                         {"pc_min_psi", c.pc_min_psi}};
  j["rock"]["fracture"] = {{"permeability_md", c.fracture_perm_md},
                           {"porosity", c.fracture_porosity},
                           {"relperm_exponent", c.fracture_relperm_exponent},
                           {"pc_max_psi", c.fracture_pc_max_psi}};
  j["fluid"] = {{"viscosity_w_cp", c.viscosity_w_cp},
                {"viscosity_n_cp", c.viscosity_n_cp},
                {"density_w_kg_m3", c.density_w_kg_m3},
                {"density_n_kg_m3", c.density_n_kg_m3}};
  j["wells"] = {{"injection_rate_m3_per_s", c.injection_rate_m3_per_s},
                {"producer_bhp_psi", c.producer_bhp_psi},
                {"producer_wi_factor", c.producer_wi_factor}};
  j["time"] = {{"end", c.end_time},         {"dt_init", c.dt_init},
               {"dt_max", c.dt_max},        {"dt_growth", c.dt_growth},
               {"dt_cut", c.dt_cut},        {"max_newton", c.max_newton},
               {"max_cuts", c.max_cuts},    {"newton_tol", c.newton_tol},
               {"report", c.report_times}};
  j["error_norms"] = {{"sample_lo", c.error_sample_lo},
                      {"sample_hi", c.error_sample_hi},
                      {"samples", c.error_samples}};
  j["initial_pressure_psi"] = c.initial_pressure_psi;
  j["output_dir"] = c.output_dir;
  return j;
}

void validate_config(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("invalid config: " + msg);
  };
  require(c.n_matrix >= 1, "n_matrix must be >= 1");
  if (c.kind == ScenarioConfig::Kind::spontaneous) {
    require(c.n_fracture >= 1, "n_fracture must be >= 1");
  } else {
    require(c.n_matrix >= 2 && c.n_matrix % 2 == 0,
            "forced scenario needs an even n_matrix >= 2");
  }
  require(c.length_m > 0.0, "length_m must be positive");
  require(c.area_m2 > 0.0, "area_m2 must be positive");
  require(c.fracture_pv_multiplier > 0.0, "fracture_pv_multiplier must be positive");
  require(c.matrix_perm_md > 0.0 && c.fracture_perm_md > 0.0,
          "permeabilities must be positive");
  require(c.matrix_porosity > 0.0 && c.matrix_porosity <= 1.0,
          "matrix porosity must lie in (0,1]");
  require(c.fracture_porosity > 0.0 && c.fracture_porosity <= 1.0,
          "fracture porosity must lie in (0,1]");
  require(c.matrix_relperm_exponent >= 1 && c.fracture_relperm_exponent >= 1,
          "relperm exponents must be >= 1");
  require(c.entry_pressure_psi > 0.0, "entry_pressure_psi must be positive");
  require(c.pc_exponent > 1.0, "pc_exponent must exceed 1");
  require(c.pc_min_psi < 0.0 && c.pc_max_psi > 0.0,
          "need pc_min_psi < 0 < pc_max_psi");
  require(c.fracture_pc_max_psi > 0.0, "fracture_pc_max_psi must be positive");
  require(c.fracture_pc_max_psi < c.pc_max_psi,
          "fracture_pc_max_psi must be below the matrix pc_max_psi");
  require(c.viscosity_w_cp > 0.0 && c.viscosity_n_cp > 0.0,
          "viscosities must be positive");
  require(c.density_w_kg_m3 > 0.0 && c.density_n_kg_m3 > 0.0,
          "densities must be positive");
  require(c.injection_rate_m3_per_s > 0.0 ||
              c.kind == ScenarioConfig::Kind::spontaneous,
          "injection rate must be positive for the forced scenario");
  require(c.end_time > 0.0 && c.dt_init > 0.0 && c.dt_max >= c.dt_init,
          "time controls must satisfy 0 < dt_init <= dt_max and end > 0");
  require(c.dt_growth >= 1.0, "dt_growth must be >= 1");
  require(c.dt_cut > 0.0 && c.dt_cut < 1.0, "dt_cut must lie in (0,1)");
  require(c.max_newton >= 1 && c.max_cuts >= 1, "iteration limits must be >= 1");
  require(c.newton_tol > 0.0, "newton_tol must be positive");
  require(c.error_samples >= 2, "error_norms.samples must be >= 2");
  require(c.error_sample_lo > 0.0 && c.error_sample_hi > c.error_sample_lo,
          "error sample range must satisfy 0 < lo < hi");
  for (double r : c.report_times) {
    require(r >= 0.0 && r <= c.end_time, "report times must lie in [0, end]");
  }
}

}  // namespace fracsim
