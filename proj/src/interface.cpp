#include "fracsim/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracsim {

HMapResult h_map(double s_m, const RockRegion& matrix,
                 const RockRegion& fracture) {
  const double p_max = fracture.pc.max();
  if (!(matrix.pc.max() > p_max) || !(matrix.pc.min() < fracture.pc.min())) {
    throw std::invalid_argument(
        "h_map: matrix capillary range must contain the fracture range");
  }
  const double pc_m = matrix.pc.pc(s_m);
  if (pc_m <= 0.0) return {1.0, 0.0};
  if (pc_m >= p_max) return {0.0, 0.0};
  return {1.0 - pc_m / p_max, -matrix.pc.dpc(s_m) / p_max};
}

namespace {

struct ResidualEval {
  double r = 0.0;
  double dr = 0.0;  // dR/dd
  FractionalFlux left, right;
  double s_f = 0.0;
  double dh = 0.0;
};

FractionalFlux side_flux(Scheme scheme, double u_t, double t_hat, double dz,
                         const RockRegion& region, const Fluid& fluid,
                         const DiffusionMaxCache& cache, double s_cell,
                         double s_face) {
  if (scheme == Scheme::ihu_c) {
    return ihu_fractional_flux(u_t, t_hat, dz, region, fluid, cache, s_cell,
                               s_face);
  }
  return ppu_fractional_flux(u_t, t_hat, dz, region, fluid, s_cell, s_face);
}

ResidualEval eval_residual(const InterfaceSolveInput& in, bool matrix_is_i,
                           double d) {
  ResidualEval e;
  const RockRegion& mat = matrix_is_i ? *in.region_i : *in.region_j;
  const RockRegion& frac = matrix_is_i ? *in.region_j : *in.region_i;
  const HMapResult h = h_map(d, mat, frac);
  e.s_f = h.s_f;
  e.dh = h.dh;
  const double face_i = matrix_is_i ? d : h.s_f;
  const double face_j = matrix_is_i ? h.s_f : d;
  e.left = side_flux(in.scheme, in.u_t, in.t_hat_i, in.dz_half_i, *in.region_i,
                     *in.fluid, *in.cache_i, in.s_i, face_i);
  e.right = side_flux(in.scheme, -in.u_t, in.t_hat_j, in.dz_half_j,
                      *in.region_j, *in.fluid, *in.cache_j, in.s_j, face_j);
  e.r = e.left.fw + e.right.fw;
  e.dr = e.left.d_sb * (matrix_is_i ? 1.0 : h.dh) +
         e.right.d_sb * (matrix_is_i ? h.dh : 1.0);
  return e;
}

}  // namespace

InterfaceSolveResult solve_interface(const InterfaceSolveInput& in) {
  const bool matrix_is_i = in.region_i->id == RegionId::matrix;
  if (in.region_i->id == in.region_j->id) {
    throw std::invalid_argument("solve_interface: not a region boundary");
  }

  const double target = in.tol * in.pv_per_time;
  // Polish well past the acceptance target: the global Newton sees the
  // local root as a function of the cell states, and leftover local
  // residual shows up there as flux jitter.
  const double polish = 1e-6 * target;
  InterfaceSolveResult out;
  out.matrix_is_i = matrix_is_i;

  auto finish = [&](double d, const ResidualEval& e, int iters, bool clamped) {
    out.s_m = d;
    out.s_f = e.s_f;
    out.dh = e.dh;
    out.fw = e.left.fw;
    out.fw_right = e.right.fw;
    out.residual = e.r;
    out.left = e.left;
    out.right = e.right;
    out.iterations = iters;
    out.clamped = clamped;
    out.converged = clamped || std::abs(e.r) <= target;
    return out;
  };

  ResidualEval at0 = eval_residual(in, matrix_is_i, 0.0);
  ResidualEval at1 = eval_residual(in, matrix_is_i, 1.0);
  if (std::abs(at0.r) <= polish) return finish(0.0, at0, 0, false);
  if (std::abs(at1.r) <= polish) return finish(1.0, at1, 0, false);
  if ((at0.r > 0.0) == (at1.r > 0.0)) {
    // One-directional throughput: no interior root. Keep the endpoint with
    // the smaller imbalance and flag it.
    return std::abs(at0.r) <= std::abs(at1.r) ? finish(0.0, at0, 0, true)
                                              : finish(1.0, at1, 0, true);
  }

  double lo = 0.0, hi = 1.0;
  double r_lo = at0.r;
  double d = std::clamp(0.5 * (in.s_i + in.s_j), 1e-12, 1.0 - 1e-12);
  ResidualEval e = eval_residual(in, matrix_is_i, d);
  int iters = 1;
  for (; iters <= in.max_iter; ++iters) {
    if (std::abs(e.r) <= polish) break;
    if ((e.r > 0.0) == (r_lo > 0.0)) {
      lo = d;
      r_lo = e.r;
    } else {
      hi = d;
    }
    double next = d - e.r / e.dr;
    if (!(std::isfinite(next)) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(d))) {
      break;  // bracket exhausted at double resolution
    }
    d = next;
    e = eval_residual(in, matrix_is_i, d);
  }
  return finish(d, e, iters, false);
}

InterfaceSensitivities interface_sensitivities(const InterfaceSolveInput& in,
                                               const InterfaceSolveResult& r,
                                               const CellPairValue& u_t) {
  const double f_i = r.matrix_is_i ? 1.0 : r.dh;
  const double f_j = r.matrix_is_i ? r.dh : 1.0;
  const double rd = r.left.d_sb * f_i + r.right.d_sb * f_j;
  if (std::abs(rd) < 1e-14) {
    throw std::runtime_error(
        "interface_sensitivities: degenerate dR/dS at the interface");
  }
  (void)in;

  InterfaceSensitivities out;
  auto dtau = [&](double ut_dtau, double left_direct, double right_direct) {
    const double r_tau = r.left.d_ut * ut_dtau - r.right.d_ut * ut_dtau +
                         left_direct + right_direct;
    return -r_tau / rd;
  };
  out.s_m.v = r.s_m;
  out.s_m.dpi = dtau(u_t.dpi, 0.0, 0.0);
  out.s_m.dpj = dtau(u_t.dpj, 0.0, 0.0);
  out.s_m.dsi = dtau(u_t.dsi, r.left.d_sa, 0.0);
  out.s_m.dsj = dtau(u_t.dsj, 0.0, r.right.d_sa);

  // Left flux drives the left-cell derivatives, right flux the right-cell
  // ones; the assembled value is the left flux.
  out.fw.v = r.fw;
  out.fw.dpi = r.left.d_ut * u_t.dpi + r.left.d_sb * f_i * out.s_m.dpi;
  out.fw.dsi = r.left.d_ut * u_t.dsi + r.left.d_sa +
               r.left.d_sb * f_i * out.s_m.dsi;
  const double fr_dpj =
      -r.right.d_ut * u_t.dpj + r.right.d_sb * f_j * out.s_m.dpj;
  const double fr_dsj = -r.right.d_ut * u_t.dsj + r.right.d_sa +
                        r.right.d_sb * f_j * out.s_m.dsj;
  out.fw.dpj = -fr_dpj;
  out.fw.dsj = -fr_dsj;
  return out;
}

}  // namespace fracsim
