#include "fracsim/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fracsim/config.hpp"
#include "fracsim/units.hpp"

namespace fracsim {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::ppu: return "ppu";
    case Scheme::ppu_c: return "ppu-c";
    case Scheme::ihu_c: return "ihu-c";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "ppu") return Scheme::ppu;
  if (name == "ppu-c") return Scheme::ppu_c;
  if (name == "ihu-c") return Scheme::ihu_c;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected one of ppu, ppu-c, ihu-c)");
}

ScenarioConfig default_spontaneous() { return {}; }

ScenarioConfig default_forced() {
  ScenarioConfig cfg;
  cfg.kind = ScenarioConfig::Kind::forced;
  cfg.n_matrix = 10;
  cfg.n_fracture = 0;
  cfg.end_time = 2.0;  // PVI; steady state is reached near 1 PVI
  cfg.dt_init = 1e-4;
  cfg.dt_max = 0.01;
  cfg.report_times = {0.01, 0.1, 1.0};
  return cfg;
}

BuiltScenario build_scenario(const ScenarioConfig& cfg) {
  using namespace units;
  BuiltScenario out;

  Fluid fluid;
  fluid.mu_w = cfg.viscosity_w_cp * centipoise;
  fluid.mu_n = cfg.viscosity_n_cp * centipoise;
  fluid.rho_w = cfg.density_w_kg_m3;
  fluid.rho_n = cfg.density_n_kg_m3;

  RockRegion matrix;
  matrix.id = RegionId::matrix;
  matrix.krw = {cfg.matrix_relperm_exponent};
  matrix.krn = {cfg.matrix_relperm_exponent};
  matrix.pc = CapillaryCurve(
      fit_pc_bounds(cfg.entry_pressure_psi * psi, cfg.pc_exponent,
                    cfg.pc_max_psi * psi, cfg.pc_min_psi * psi));
  matrix.porosity = cfg.matrix_porosity;
  matrix.permeability = cfg.matrix_perm_md * millidarcy;

  RockRegion fracture;
  fracture.id = RegionId::fracture;
  fracture.krw = {cfg.fracture_relperm_exponent};
  fracture.krn = {cfg.fracture_relperm_exponent};
  fracture.pc =
      CapillaryCurve(FractureCapillaryCurve{cfg.fracture_pc_max_psi * psi});
  fracture.porosity = cfg.fracture_porosity;
  fracture.permeability = cfg.fracture_perm_md * millidarcy;

  Problem& pb = out.problem;
  pb.matrix = matrix;
  pb.fracture = fracture;
  pb.fluid = fluid;

  const double p0 = cfg.initial_pressure_psi * psi;
  if (cfg.kind == ScenarioConfig::Kind::spontaneous) {
    pb.grid = build_spontaneous_grid(
        cfg.n_matrix, cfg.n_fracture, cfg.length_m, matrix.permeability,
        fracture.permeability, matrix.porosity, fracture.porosity,
        cfg.fracture_pv_multiplier, cfg.area_m2);
  } else {
    pb.grid = build_forced_grid(cfg.n_matrix, cfg.length_m,
                                matrix.permeability, fracture.permeability,
                                matrix.porosity, fracture.porosity,
                                cfg.tilt_deg, cfg.area_m2);
    WellSpec inj;
    inj.kind = WellSpec::Kind::rate_injector;
    inj.cell = 0;
    inj.rate = cfg.injection_rate_m3_per_s;
    WellSpec prod;
    prod.kind = WellSpec::Kind::pressure_producer;
    prod.cell = pb.grid.n_cells - 1;
    prod.bhp = cfg.producer_bhp_psi * psi;
    prod.well_index = cfg.producer_wi_factor * fracture.permeability *
                      cfg.area_m2 / pb.grid.dx.back();
    pb.wells = {inj, prod};
  }
  pb.scheme = cfg.scheme;
  pb.finalize(p0);

  out.total_pore_volume = 0.0;
  for (double pv : pb.grid.pore_volume) out.total_pore_volume += pv;

  if (cfg.kind == ScenarioConfig::Kind::spontaneous) {
    out.t_char = matrix.porosity * cfg.length_m * cfg.length_m /
                 (matrix.permeability * pb.cache_matrix.global_max());
  } else {
    out.t_char = out.total_pore_volume / cfg.injection_rate_m3_per_s;
  }

  State& s = out.initial;
  s.p.assign(pb.grid.n_cells, p0);
  s.S.resize(pb.grid.n_cells);
  for (int i = 0; i < pb.grid.n_cells; ++i) {
    const bool in_matrix = pb.grid.region[i] == RegionId::matrix;
    if (cfg.kind == ScenarioConfig::Kind::spontaneous) {
      s.S[i] = in_matrix ? 0.0 : 1.0;
    } else {
      s.S[i] = in_matrix ? 0.5 : 0.97;
    }
  }

  TimeControls& tc = out.controls;
  tc.t_end = cfg.end_time * out.t_char;
  tc.dt_init = cfg.dt_init * out.t_char;
  tc.dt_max = cfg.dt_max * out.t_char;
  tc.dt_growth = cfg.dt_growth;
  tc.dt_cut = cfg.dt_cut;
  tc.max_cuts = cfg.max_cuts;
  for (double r : cfg.report_times) tc.report_times.push_back(r * out.t_char);
  return out;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  RunResult rr;
  rr.config = cfg;
  rr.scenario = build_scenario(cfg);
  NewtonConfig ncfg;
  ncfg.tol = cfg.newton_tol;
  ncfg.max_newton = cfg.max_newton;
  const auto start = std::chrono::steady_clock::now();
  rr.record = run_simulation(rr.scenario.problem, rr.scenario.initial,
                             rr.scenario.controls, ncfg);
  rr.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rr;
}

RecoverySeries spontaneous_recovery(const RunResult& rr) {
  return recovery_curve(rr.record, rr.scenario.t_char);
}

SweepResult refinement_sweep(const ScenarioConfig& base,
                             const std::vector<int>& n_list,
                             const std::vector<Scheme>& schemes,
                             int reference_n, int threads) {
  SweepResult out;
  out.reference_n = reference_n;
  out.reference_scheme = Scheme::ihu_c;

  ScenarioConfig ref_cfg = base;
  ref_cfg.scheme = out.reference_scheme;
  ref_cfg.n_matrix = ref_cfg.n_fracture = reference_n;
  const RunResult ref_run = run_scenario(ref_cfg);
  if (!ref_run.record.completed) {
    throw SolverError("reference run failed: " + ref_run.record.failure);
  }
  out.reference = spontaneous_recovery(ref_run);
  out.reference_t80 = out.reference.time_at_recovery(80.0);

  const std::vector<double> samples =
      log_spaced(base.error_sample_lo, base.error_sample_hi, base.error_samples);

  std::vector<SweepEntry> entries;
  for (Scheme sch : schemes) {
    for (int n : n_list) {
      SweepEntry e;
      e.scheme = sch;
      e.n = n;
      entries.push_back(e);
    }
  }
  const int count = static_cast<int>(entries.size());
#ifdef _OPENMP
  const int nt = threads == 0 ? omp_get_max_threads() : threads;
#else
  const int nt = 1;
  (void)threads;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(nt) if (nt > 1)
  for (int k = 0; k < count; ++k) {
    SweepEntry& e = entries[k];
    try {
      ScenarioConfig cfg = base;
      cfg.scheme = e.scheme;
      cfg.n_matrix = cfg.n_fracture = e.n;
      const RunResult run = run_scenario(cfg);
      if (!run.record.completed) throw SolverError(run.record.failure);
      const RecoverySeries rec = spontaneous_recovery(run);
      e.e2 = error_norms(rec, out.reference, samples).e2;
      e.t80 = rec.time_at_recovery(80.0);
      e.ok = true;
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
  }
  out.entries = std::move(entries);
  return out;
}

namespace {

double dimensionless_unit(const RunResult& rr, double t_seconds) {
  return t_seconds / rr.scenario.t_char;
}

}  // namespace

std::vector<std::string> write_run_outputs(const RunResult& rr,
                                           const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> files;
  const SimulationRecord& rec = rr.record;
  const Grid1D& g = rr.scenario.problem.grid;

  {
    CsvTable t;
    std::vector<double> td;
    for (double s : rec.time) td.push_back(dimensionless_unit(rr, s));
    t.add_column("time_s", rec.time);
    t.add_column("time_dimless", td);
    t.add_column("matrix_nonwetting_m3", rec.matrix_nonwetting);
    t.add_column("avg_matrix_sn", rec.avg_matrix_sn);
    t.add_column("producer_rate_w_m3_s", rec.producer_rate_w);
    t.add_column("producer_rate_n_m3_s", rec.producer_rate_n);
    t.add_column("injected_w_cum_m3", rec.injected_w_cum);
    t.add_column("produced_w_cum_m3", rec.produced_w_cum);
    t.add_column("produced_n_cum_m3", rec.produced_n_cum);
    t.write(dir / "series.csv");
    files.push_back("series.csv");
  }

  if (rr.config.kind == ScenarioConfig::Kind::spontaneous &&
      rec.completed) {
    const RecoverySeries rs = spontaneous_recovery(rr);
    CsvTable t;
    t.add_column("t_d", rs.t_d);
    t.add_column("recovery_pct", rs.pct);
    t.write(dir / "recovery.csv");
    files.push_back("recovery.csv");
  }

  {
    CsvTable t;
    std::vector<double> ts, x, xd, z, region, p, sw, sn;
    for (const Snapshot& snap : rec.snapshots) {
      for (int i = 0; i < g.n_cells; ++i) {
        ts.push_back(dimensionless_unit(rr, snap.time));
        x.push_back(g.x_center[i]);
        xd.push_back(g.x_center[i] / g.length);
        z.push_back(g.z[i]);
        region.push_back(g.region[i] == RegionId::matrix ? 0.0 : 1.0);
        p.push_back(snap.state.p[i]);
        sw.push_back(snap.state.S[i]);
        sn.push_back(1.0 - snap.state.S[i]);
      }
    }
    t.add_column("time_dimless", ts);
    t.add_column("x_m", x);
    t.add_column("x_d", xd);
    t.add_column("z_m", z);
    t.add_column("region", region);
    t.add_column("p_pa", p);
    t.add_column("s_w", sw);
    t.add_column("s_n", sn);
    t.write(dir / "profiles.csv");
    files.push_back("profiles.csv");
  }

  {
    CsvTable t;
    std::vector<double> ts, x, sm, sf;
    for (const Snapshot& snap : rec.snapshots) {
      for (const InterfaceSatRecord& r : snap.interface_sats) {
        ts.push_back(dimensionless_unit(rr, snap.time));
        x.push_back(g.x_center[r.i] + 0.5 * g.dx[r.i]);
        sm.push_back(r.s_m);
        sf.push_back(r.s_f);
      }
    }
    t.add_column("time_dimless", ts);
    t.add_column("x_m", x);
    t.add_column("s_w_matrix_side", sm);
    t.add_column("s_w_fracture_side", sf);
    t.write(dir / "interface_saturations.csv");
    files.push_back("interface_saturations.csv");
  }

  nlohmann::json manifest;
  manifest["config"] = config_to_json(rr.config);
  manifest["scheme"] = scheme_name(rr.config.scheme);
  manifest["grid"] = {{"n_cells", g.n_cells},
                      {"length_m", g.length},
                      {"area_m2", g.area}};
  manifest["t_char_seconds"] = rr.scenario.t_char;
  manifest["total_pore_volume_m3"] = rr.scenario.total_pore_volume;
  manifest["matrix_diffusion_max"] =
      rr.scenario.problem.cache_matrix.global_max();
  manifest["newton"] = {{"total_iterations", rec.total_newton},
                        {"time_step_cuts", rec.total_cuts}};
  manifest["completed"] = rec.completed;
  manifest["failure"] = rec.failure;
  manifest["wall_seconds"] = rr.wall_seconds;
  files.push_back("manifest.json");
  manifest["files"] = files;

  const fs::path tmp = dir / "manifest.json.tmp";
  {
    std::ofstream f(tmp);
    f << manifest.dump(2) << '\n';
  }
  fs::rename(tmp, dir / "manifest.json");
  return files;
}

}  // namespace fracsim
