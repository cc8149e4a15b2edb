#include "fracsim/solver.hpp"

#include <algorithm>
#include <cmath>

namespace fracsim {

void Problem::finalize(double datum_pressure) {
  cache_matrix = DiffusionMaxCache(matrix, fluid);
  cache_fracture = DiffusionMaxCache(fracture, fluid);
  pin_pressure = true;
  for (const auto& w : wells) {
    if (w.kind == WellSpec::Kind::pressure_producer) pin_pressure = false;
  }
  pin_cell = grid.n_cells - 1;
  pin_value = datum_pressure;
}

namespace {

// Jacobian block entry helpers: equations (rows) are [wetting, nonwetting],
// unknowns (cols) are [p, S].
inline void add_row(std::array<double, 4>& block, int phase_row, double dp,
                    double ds) {
  block[2 * phase_row] += dp;
  block[2 * phase_row + 1] += ds;
}

void add_flux_jacobian(AssembledSystem& sys, int i, int j, int phase,
                       const CellPairValue& f) {
  // +F in cell i's equation, -F in cell j's (j = i+1 on this grid).
  add_row(sys.jac.diag[i], phase, f.dpi, f.dsi);
  add_row(sys.jac.upper[i], phase, f.dpj, f.dsj);
  add_row(sys.jac.diag[j], phase, -f.dpj, -f.dsj);
  add_row(sys.jac.lower[i], phase, -f.dpi, -f.dsi);
}

CellPairValue subtract(const CellPairValue& a, const CellPairValue& b) {
  return {a.v - b.v, a.dpi - b.dpi, a.dpj - b.dpj, a.dsi - b.dsi,
          a.dsj - b.dsj};
}

}  // namespace

void assemble(const Problem& pb, const State& current, const State& old,
              double dt, AssembledSystem& out) {
  const Grid1D& g = pb.grid;
  const int n = g.n_cells;
  out.residual.assign(2 * n, 0.0);
  if (out.jac.n != n) out.jac.resize(n);
  out.jac.set_zero();
  out.interface_sats.clear();

  // Accumulation.
  for (int i = 0; i < n; ++i) {
    const double pv_dt = g.pore_volume[i] / dt;
    const double ds = current.S[i] - old.S[i];
    out.residual[2 * i] += pv_dt * ds;
    out.residual[2 * i + 1] -= pv_dt * ds;
    add_row(out.jac.diag[i], 0, 0.0, pv_dt);
    add_row(out.jac.diag[i], 1, 0.0, -pv_dt);
  }

  // Wells enter as sources: R = accumulation + flux - q.
  for (const auto& w : pb.wells) {
    const int c = w.cell;
    if (w.kind == WellSpec::Kind::rate_injector) {
      out.residual[2 * c] -= w.rate;
    } else {
      const double dp = current.p[c] - w.bhp;
      const Mobility lw = wetting_mobility(pb.region(c), pb.fluid, current.S[c]);
      const Mobility ln =
          nonwetting_mobility(pb.region(c), pb.fluid, current.S[c]);
      out.residual[2 * c] += w.well_index * lw.lam * dp;
      out.residual[2 * c + 1] += w.well_index * ln.lam * dp;
      add_row(out.jac.diag[c], 0, w.well_index * lw.lam,
              w.well_index * lw.dlam * dp);
      add_row(out.jac.diag[c], 1, w.well_index * ln.lam,
              w.well_index * ln.dlam * dp);
    }
  }

  // Interface fluxes.
  for (const auto& f : g.interfaces) {
    const int i = f.i, j = f.j;
    const RockRegion& ri = pb.region(i);
    const RockRegion& rj = pb.region(j);
    FluxEval ev;
    if (!f.region_boundary) {
      if (pb.scheme == Scheme::ihu_c) {
        const CellPairValue ut =
            ppu_total_velocity(f.trans, f.dz, ri, rj, pb.fluid, current.p[i],
                               current.p[j], current.S[i], current.S[j]);
        ev = ihu_interior_flux(ut, f.trans, f.dz, ri, pb.fluid, pb.cache(i),
                               current.S[i], current.S[j]);
      } else {
        ev = ppu_flux(f.trans, f.dz, ri, rj, pb.fluid, current.p[i],
                      current.p[j], current.S[i], current.S[j]);
      }
    } else if (pb.scheme == Scheme::ppu) {
      ev = ppu_flux(f.trans, f.dz, ri, rj, pb.fluid, current.p[i],
                    current.p[j], current.S[i], current.S[j]);
    } else {
      const CellPairValue ut =
          ppu_total_velocity(f.trans, f.dz, ri, rj, pb.fluid, current.p[i],
                             current.p[j], current.S[i], current.S[j]);
      InterfaceSolveInput in;
      in.scheme = pb.scheme;
      in.u_t = ut.v;
      in.s_i = current.S[i];
      in.s_j = current.S[j];
      in.t_hat_i = f.t_hat_i;
      in.t_hat_j = f.t_hat_j;
      in.dz_half_i = f.dz_half_i;
      in.dz_half_j = f.dz_half_j;
      in.region_i = &ri;
      in.region_j = &rj;
      in.cache_i = &pb.cache(i);
      in.cache_j = &pb.cache(j);
      in.fluid = &pb.fluid;
      in.pv_per_time = (g.pore_volume[i] + g.pore_volume[j]) / dt;
      const InterfaceSolveResult res = solve_interface(in);
      if (!res.converged) {
        throw SolverError("interface solve did not converge at interface " +
                          std::to_string(i) + "-" + std::to_string(j));
      }
      const InterfaceSensitivities sens =
          interface_sensitivities(in, res, ut);
      ev.ut = ut;
      ev.fw = sens.fw;
      ev.fn = subtract(ut, sens.fw);
      out.interface_sats.push_back({i, j, res.s_m, res.s_f});
    }
    out.residual[2 * i] += ev.fw.v;
    out.residual[2 * j] -= ev.fw.v;
    out.residual[2 * i + 1] += ev.fn.v;
    out.residual[2 * j + 1] -= ev.fn.v;
    add_flux_jacobian(out, i, j, 0, ev.fw);
    add_flux_jacobian(out, i, j, 1, ev.fn);
  }
}

double scaled_residual_norm(const Problem& pb,
                            const std::vector<double>& residual, double dt) {
  double worst = 0.0;
  for (int i = 0; i < pb.grid.n_cells; ++i) {
    const double scale = dt / pb.grid.pore_volume[i];
    worst = std::max(worst, std::abs(residual[2 * i]) * scale);
    worst = std::max(worst, std::abs(residual[2 * i + 1]) * scale);
  }
  return worst;
}

namespace {

double scaled_balance_norm(const Problem& pb,
                           const std::vector<double>& residual, double dt) {
  double sum_w = 0.0, sum_n = 0.0, pv = 0.0;
  for (int i = 0; i < pb.grid.n_cells; ++i) {
    sum_w += residual[2 * i];
    sum_n += residual[2 * i + 1];
    pv += pb.grid.pore_volume[i];
  }
  return std::max(std::abs(sum_w), std::abs(sum_n)) * dt / pv;
}

}  // namespace

namespace {

void apply_pressure_pin(const Problem& pb, const State& state, double dt,
                        AssembledSystem& sys) {
  if (!pb.pin_pressure) return;
  const int c = pb.pin_cell;
  const double sigma = pb.grid.pore_volume[c] / dt /
                       std::max(1.0, std::abs(pb.pin_value));
  sys.residual[2 * c + 1] = (state.p[c] - pb.pin_value) * sigma;
  sys.jac.diag[c][2] = sigma;
  sys.jac.diag[c][3] = 0.0;
  if (c > 0) {
    sys.jac.lower[c - 1][2] = 0.0;
    sys.jac.lower[c - 1][3] = 0.0;
  }
  if (c + 1 < pb.grid.n_cells) {
    sys.jac.upper[c][2] = 0.0;
    sys.jac.upper[c][3] = 0.0;
  }
}

}  // namespace

NewtonReport newton_solve(const Problem& pb, State& state, const State& old,
                          double dt, const NewtonConfig& cfg,
                          AssembledSystem& work) {
  NewtonReport rep;
  const int n = pb.grid.n_cells;
  std::vector<double> rhs;

  assemble(pb, state, old, dt, work);
  double norm = scaled_residual_norm(pb, work.residual, dt);
  rep.residual_history.push_back(norm);
  int stalls = 0;
  for (int it = 0; it <= cfg.max_newton; ++it) {
    if (norm < cfg.tol &&
        scaled_balance_norm(pb, work.residual, dt) < cfg.mass_tol) {
      rep.converged = true;
      rep.iterations = it;
      return rep;
    }
    if (it == cfg.max_newton) break;

    apply_pressure_pin(pb, state, dt, work);
    rhs = work.residual;
    for (double& v : rhs) v = -v;
    solve_block_tridiag(work.jac, rhs);

    double max_ds = 0.0;
    for (int i = 0; i < n; ++i) max_ds = std::max(max_ds, std::abs(rhs[2 * i + 1]));
    double alpha =
        max_ds > cfg.max_sat_update ? cfg.max_sat_update / max_ds : 1.0;

    // Backtracking guards against upwind-switch chatter and the strong
    // capillary curvature near the saturation endpoints: accept the first
    // fraction of the update that reduces the residual, or the shortest
    // trial when none does (two stalls abort the step).
    const State base = state;
    bool improved = false;
    constexpr int max_trials = 12;
    for (int trial = 0; trial < max_trials; ++trial) {
      for (int i = 0; i < n; ++i) {
        state.p[i] = base.p[i] + alpha * rhs[2 * i];
        state.S[i] = std::clamp(base.S[i] + alpha * rhs[2 * i + 1], 0.0, 1.0);
      }
      assemble(pb, state, old, dt, work);
      const double norm_c = scaled_residual_norm(pb, work.residual, dt);
      if (norm_c < norm || trial == max_trials - 1) {
        improved = norm_c < norm;
        norm = norm_c;
        break;
      }
      alpha *= 0.5;
    }
    rep.residual_history.push_back(norm);
    stalls = improved ? 0 : stalls + 1;
    if (stalls >= 2) break;
  }
  rep.iterations = static_cast<int>(rep.residual_history.size()) - 1;
  rep.converged = false;
  return rep;
}

namespace {

void record_series(const Problem& pb, const State& state, double t,
                   double dt_done, SimulationRecord& rec) {
  const Grid1D& g = pb.grid;
  double vol_n = 0.0, pv_m = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    if (g.region[i] == RegionId::matrix) {
      vol_n += g.pore_volume[i] * (1.0 - state.S[i]);
      pv_m += g.pore_volume[i];
    }
  }
  double rate_w = 0.0, rate_n = 0.0, inj = 0.0;
  for (const auto& w : pb.wells) {
    if (w.kind == WellSpec::Kind::rate_injector) {
      inj += w.rate;
    } else {
      const double dp = state.p[w.cell] - w.bhp;
      rate_w += w.well_index *
                wetting_mobility(pb.region(w.cell), pb.fluid, state.S[w.cell]).lam * dp;
      rate_n += w.well_index *
                nonwetting_mobility(pb.region(w.cell), pb.fluid, state.S[w.cell]).lam * dp;
    }
  }
  const double prev_inj = rec.injected_w_cum.empty() ? 0.0 : rec.injected_w_cum.back();
  const double prev_pw = rec.produced_w_cum.empty() ? 0.0 : rec.produced_w_cum.back();
  const double prev_pn = rec.produced_n_cum.empty() ? 0.0 : rec.produced_n_cum.back();
  rec.time.push_back(t);
  rec.matrix_nonwetting.push_back(vol_n);
  rec.avg_matrix_sn.push_back(pv_m > 0.0 ? vol_n / pv_m : 0.0);
  rec.producer_rate_w.push_back(rate_w);
  rec.producer_rate_n.push_back(rate_n);
  rec.injected_w_cum.push_back(prev_inj + inj * dt_done);
  rec.produced_w_cum.push_back(prev_pw + rate_w * dt_done);
  rec.produced_n_cum.push_back(prev_pn + rate_n * dt_done);
}

}  // namespace

SimulationRecord run_simulation(const Problem& pb, State initial,
                                const TimeControls& tc,
                                const NewtonConfig& ncfg) {
  SimulationRecord rec;
  State state = std::move(initial);
  AssembledSystem work;
  record_series(pb, state, 0.0, 0.0, rec);

  std::vector<double> reports = tc.report_times;
  std::sort(reports.begin(), reports.end());
  std::size_t next_report = 0;
  while (next_report < reports.size() && reports[next_report] <= 0.0) {
    rec.snapshots.push_back({0.0, state, {}});
    ++next_report;
  }

  double t = 0.0;
  double dt = tc.dt_init;
  int cuts = 0;
  const double t_eps = 1e-12 * tc.t_end;
  while (t < tc.t_end - t_eps) {
    double dt_try = std::min(dt, tc.t_end - t);
    if (next_report < reports.size()) {
      dt_try = std::min(dt_try, reports[next_report] - t);
    }
    State candidate = state;
    bool ok = false;
    NewtonReport rep;
    try {
      rep = newton_solve(pb, candidate, state, dt_try, ncfg, work);
      ok = rep.converged;
    } catch (const std::runtime_error&) {
      ok = false;
    }
    rec.total_newton += rep.iterations;
    if (!ok) {
      ++rec.total_cuts;
      if (++cuts > tc.max_cuts) {
        rec.failure = "time step failed after " + std::to_string(cuts) +
                      " consecutive cuts at t=" + std::to_string(t);
        rec.final_state = state;
        return rec;
      }
      dt *= tc.dt_cut;
      continue;
    }
    cuts = 0;
    t += dt_try;
    state = std::move(candidate);
    record_series(pb, state, t, dt_try, rec);
    if (next_report < reports.size() &&
        t >= reports[next_report] - t_eps - 1e-30) {
      rec.snapshots.push_back({t, state, work.interface_sats});
      ++next_report;
    }
    dt = std::min(dt * tc.dt_growth, tc.dt_max);
  }
  rec.completed = true;
  rec.final_state = state;
  return rec;
}

}  // namespace fracsim
