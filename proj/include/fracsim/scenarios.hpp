#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracsim/analysis.hpp"
#include "fracsim/solver.hpp"

namespace fracsim {

/// Full parameterization of one run. Defaults reproduce the benchmark
/// setups exactly; every field is overridable through the config file.
/// Times are dimensionless: diffusion time t_D for the spontaneous case,
/// pore volumes injected for the forced case.
struct ScenarioConfig {
  enum class Kind { spontaneous, forced };
  Kind kind = Kind::spontaneous;
  Scheme scheme = Scheme::ihu_c;

  // grid
  int n_matrix = 16;
  int n_fracture = 16;  // spontaneous only; forced grids derive cell counts
  double length_m = 20.0;
  double area_m2 = 1.0;
  double tilt_deg = 15.0;                  // forced only
  double fracture_pv_multiplier = 100.0;   // spontaneous only

  // rock
  double matrix_perm_md = 1.0;
  double fracture_perm_md = 1e5;
  double matrix_porosity = 0.2;
  double fracture_porosity = 0.2;
  int matrix_relperm_exponent = 2;
  int fracture_relperm_exponent = 1;
  double entry_pressure_psi = 3.0;
  double pc_exponent = 4.0;
  double pc_max_psi = 15.0;
  double pc_min_psi = -15.0;
  double fracture_pc_max_psi = 0.1;

  // fluid
  double viscosity_w_cp = 1.0;
  double viscosity_n_cp = 1.0;
  double density_w_kg_m3 = 1000.0;
  double density_n_kg_m3 = 800.0;

  // wells (forced)
  double injection_rate_m3_per_s = 1.6e-9;
  double producer_bhp_psi = 3000.0;
  double producer_wi_factor = 1000.0;

  // time stepping (dimensionless units as above)
  double end_time = 2.0;
  double dt_init = 1e-4;
  double dt_max = 0.01;
  double dt_growth = 1.5;
  double dt_cut = 0.5;
  int max_newton = 25;
  int max_cuts = 10;
  double newton_tol = 1e-8;
  std::vector<double> report_times = {0.0008, 0.008, 0.08, 0.8};

  // error-norm sampling grid (t_D)
  double error_sample_lo = 1e-4;
  double error_sample_hi = 0.8;
  int error_samples = 200;

  double initial_pressure_psi = 3000.0;
  std::string output_dir = "out";
};

ScenarioConfig default_spontaneous();
ScenarioConfig default_forced();

/// Problem, initial condition and clock for a config. t_char converts the
/// dimensionless time unit (t_D or PVI) to seconds.
struct BuiltScenario {
  Problem problem;
  State initial;
  TimeControls controls;
  double t_char = 0.0;
  double total_pore_volume = 0.0;
};
BuiltScenario build_scenario(const ScenarioConfig& cfg);

struct RunResult {
  ScenarioConfig config;
  BuiltScenario scenario;
  SimulationRecord record;
  double wall_seconds = 0.0;
};
RunResult run_scenario(const ScenarioConfig& cfg);

/// Recovery vs t_D for a completed spontaneous run.
RecoverySeries spontaneous_recovery(const RunResult& rr);

struct SweepEntry {
  Scheme scheme = Scheme::ppu;
  int n = 0;
  double e2 = 0.0;
  double t80 = 0.0;  // t_D of 80% recovery
  bool ok = false;
  std::string error;
};
struct SweepResult {
  std::vector<SweepEntry> entries;
  RecoverySeries reference;
  double reference_t80 = 0.0;
  int reference_n = 0;
  Scheme reference_scheme = Scheme::ihu_c;
};

/// Runs every (scheme, N) member of the spontaneous refinement study
/// against an IHU-C reference at `reference_n`, in parallel when
/// `threads` != 1. Member failures are recorded and the sweep continues.
SweepResult refinement_sweep(const ScenarioConfig& base,
                             const std::vector<int>& n_list,
                             const std::vector<Scheme>& schemes,
                             int reference_n = 128, int threads = 0);

/// Writes recovery/series/profile CSVs plus manifest.json under `dir`.
/// Returns the list of files written.
std::vector<std::string> write_run_outputs(const RunResult& rr,
                                           const std::filesystem::path& dir);

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

}  // namespace fracsim
