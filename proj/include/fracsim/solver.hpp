#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fracsim/grid.hpp"
#include "fracsim/interface.hpp"
#include "fracsim/linalg.hpp"

namespace fracsim {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-cell pressure (non-wetting reference) and wetting saturation.
struct State {
  std::vector<double> p;
  std::vector<double> S;
};

struct WellSpec {
  enum class Kind { rate_injector, pressure_producer };
  Kind kind = Kind::rate_injector;
  int cell = 0;
  double rate = 0.0;        // m^3/s of wetting phase (injector)
  double bhp = 0.0;         // Pa (producer)
  double well_index = 0.0;  // m^3/(Pa.s) mobility multiplier (producer)
};

struct Problem {
  Grid1D grid;
  RockRegion matrix, fracture;
  Fluid fluid;
  DiffusionMaxCache cache_matrix, cache_fracture;
  std::vector<WellSpec> wells;
  Scheme scheme = Scheme::ppu;

  // Without a pressure-coupled source the incompressible system is
  // invariant under a uniform pressure shift; one redundant mass-balance
  // row is then swapped for a pressure datum during the linear solve.
  bool pin_pressure = false;
  int pin_cell = 0;
  double pin_value = 0.0;

  [[nodiscard]] const RockRegion& region(int cell) const {
    return grid.region[cell] == RegionId::matrix ? matrix : fracture;
  }
  [[nodiscard]] const DiffusionMaxCache& cache(int cell) const {
    return grid.region[cell] == RegionId::matrix ? cache_matrix
                                                 : cache_fracture;
  }
  /// Builds the diffusion caches and the pressure-datum choice.
  void finalize(double datum_pressure);
};

struct NewtonConfig {
  double tol = 1e-8;  // scaled residual |R| dt / (phi_i V_i)
  // per-phase global balance |sum_i R_i| dt / (sum_i phi_i V_i): keeps the
  // per-step mass drift at the stated level rather than at tol
  double mass_tol = 1e-10;
  int max_newton = 25;
  double max_sat_update = 0.2;
};

struct InterfaceSatRecord {
  int i = 0, j = 0;
  double s_m = 0.0, s_f = 0.0;
};

struct AssembledSystem {
  std::vector<double> residual;  // 2N, wetting then non-wetting per cell
  BlockTridiag jac;
  std::vector<InterfaceSatRecord> interface_sats;
};

/// Residual and Jacobian of the fully implicit system at `current`.
/// Interior same-region interfaces use the scheme's homogeneous kernels;
/// region boundaries use raw PPU for Scheme::ppu and the local interface
/// solve otherwise. Throws SolverError if a local solve fails.
void assemble(const Problem& pb, const State& current, const State& old,
              double dt, AssembledSystem& out);

/// Max over cells and phases of |R| dt / (phi_i V_i).
double scaled_residual_norm(const Problem& pb,
                            const std::vector<double>& residual, double dt);

struct NewtonReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

/// Damped Newton with clamped saturation updates; `state` is advanced in
/// place on success and restored by the caller on failure.
NewtonReport newton_solve(const Problem& pb, State& state, const State& old,
                          double dt, const NewtonConfig& cfg,
                          AssembledSystem& work);

struct TimeControls {
  double t_end = 0.0;
  double dt_init = 0.0;
  double dt_max = 0.0;
  double dt_growth = 1.5;
  double dt_cut = 0.5;
  int max_cuts = 10;
  std::vector<double> report_times;  // hit exactly; snapshots taken there
};

struct Snapshot {
  double time = 0.0;
  State state;
  std::vector<InterfaceSatRecord> interface_sats;
};

struct SimulationRecord {
  std::vector<double> time;                // accepted steps, starts at 0
  std::vector<double> matrix_nonwetting;   // non-wetting volume in matrix
  std::vector<double> avg_matrix_sn;
  std::vector<double> producer_rate_w, producer_rate_n;
  std::vector<double> injected_w_cum, produced_w_cum, produced_n_cum;
  std::vector<Snapshot> snapshots;
  State final_state;
  long total_newton = 0;
  int total_cuts = 0;
  bool completed = false;
  std::string failure;
};

SimulationRecord run_simulation(const Problem& pb, State initial,
                                const TimeControls& tc,
                                const NewtonConfig& ncfg);

}  // namespace fracsim
