#include "fracsim/flux.hpp"

#include <algorithm>
#include <cmath>

#include "fracsim/units.hpp"

namespace fracsim {

namespace {

struct UpwindedMobilities {
  Mobility w, n;
  bool w_from_a = true;
  bool n_from_a = true;
};

// Resolves the per-phase upwind directions of the PPU flux written in
// fractional-flow form. The wetting-minus-nonwetting potential difference
// delta := (rho_n - rho_w) g dz - dPc is independent of the pressure drop,
// so the signs of both phase potentials follow from (u_t, delta) plus at
// most one already-resolved mobility. Ties take the a side.
UpwindedMobilities resolve_upwind(double u_t, double trans, double delta,
                                  const RockRegion& region, const Fluid& fluid,
                                  double s_a, double s_b) {
  UpwindedMobilities up;
  if (u_t >= 0.0) {
    if (delta >= 0.0) {
      up.w_from_a = true;
      const Mobility lw = wetting_mobility(region, fluid, s_a);
      up.n_from_a = (u_t - trans * lw.lam * delta) >= 0.0;
    } else {
      up.n_from_a = true;
      const Mobility ln = nonwetting_mobility(region, fluid, s_a);
      up.w_from_a = (u_t + trans * ln.lam * delta) >= 0.0;
    }
  } else {
    if (delta >= 0.0) {
      up.n_from_a = false;
      const Mobility ln = nonwetting_mobility(region, fluid, s_b);
      up.w_from_a = (u_t + trans * ln.lam * delta) >= 0.0;
    } else {
      up.w_from_a = false;
      const Mobility lw = wetting_mobility(region, fluid, s_b);
      up.n_from_a = (u_t - trans * lw.lam * delta) >= 0.0;
    }
  }
  up.w = wetting_mobility(region, fluid, up.w_from_a ? s_a : s_b);
  up.n = nonwetting_mobility(region, fluid, up.n_from_a ? s_a : s_b);
  return up;
}

}  // namespace

FluxEval ppu_flux(double trans, double dz, const RockRegion& region_i,
                  const RockRegion& region_j, const Fluid& fluid, double p_i,
                  double p_j, double s_i, double s_j) {
  const double g = units::gravity;
  const double pc_i = region_i.pc.pc(s_i);
  const double pc_j = region_j.pc.pc(s_j);
  const double dpc_i = region_i.pc.dpc(s_i);
  const double dpc_j = region_j.pc.dpc(s_j);

  const double dphi_w = (p_i - p_j) - fluid.rho_w * g * dz - (pc_i - pc_j);
  const double dphi_n = (p_i - p_j) - fluid.rho_n * g * dz;

  FluxEval out;

  const bool w_from_i = dphi_w >= 0.0;
  const Mobility lw = w_from_i ? wetting_mobility(region_i, fluid, s_i)
                               : wetting_mobility(region_j, fluid, s_j);
  out.fw.v = trans * lw.lam * dphi_w;
  out.fw.dpi = trans * lw.lam;
  out.fw.dpj = -trans * lw.lam;
  out.fw.dsi = trans * ((w_from_i ? lw.dlam * dphi_w : 0.0) - lw.lam * dpc_i);
  out.fw.dsj = trans * ((w_from_i ? 0.0 : lw.dlam * dphi_w) + lw.lam * dpc_j);

  const bool n_from_i = dphi_n >= 0.0;
  const Mobility ln = n_from_i ? nonwetting_mobility(region_i, fluid, s_i)
                               : nonwetting_mobility(region_j, fluid, s_j);
  out.fn.v = trans * ln.lam * dphi_n;
  out.fn.dpi = trans * ln.lam;
  out.fn.dpj = -trans * ln.lam;
  out.fn.dsi = trans * (n_from_i ? ln.dlam * dphi_n : 0.0);
  out.fn.dsj = trans * (n_from_i ? 0.0 : ln.dlam * dphi_n);

  out.ut.v = out.fw.v + out.fn.v;
  out.ut.dpi = out.fw.dpi + out.fn.dpi;
  out.ut.dpj = out.fw.dpj + out.fn.dpj;
  out.ut.dsi = out.fw.dsi + out.fn.dsi;
  out.ut.dsj = out.fw.dsj + out.fn.dsj;
  return out;
}

CellPairValue ppu_total_velocity(double trans, double dz,
                                 const RockRegion& region_i,
                                 const RockRegion& region_j,
                                 const Fluid& fluid, double p_i, double p_j,
                                 double s_i, double s_j) {
  return ppu_flux(trans, dz, region_i, region_j, fluid, p_i, p_j, s_i, s_j).ut;
}

FluxDecomposition ppu_fractional_decomposition(double trans, double dz,
                                               const RockRegion& region_i,
                                               const RockRegion& region_j,
                                               const Fluid& fluid, double p_i,
                                               double p_j, double s_i,
                                               double s_j) {
  const double g = units::gravity;
  const double pc_i = region_i.pc.pc(s_i);
  const double pc_j = region_j.pc.pc(s_j);
  const double dpc = pc_i - pc_j;
  const double dphi_w = (p_i - p_j) - fluid.rho_w * g * dz - dpc;
  const double dphi_n = (p_i - p_j) - fluid.rho_n * g * dz;

  const Mobility lw = dphi_w >= 0.0 ? wetting_mobility(region_i, fluid, s_i)
                                    : wetting_mobility(region_j, fluid, s_j);
  const Mobility ln = dphi_n >= 0.0 ? nonwetting_mobility(region_i, fluid, s_i)
                                    : nonwetting_mobility(region_j, fluid, s_j);
  const double lt = lw.lam + ln.lam;
  const double u_t = trans * (lw.lam * dphi_w + ln.lam * dphi_n);
  const double lam_prod = lt > 0.0 ? lw.lam * ln.lam / lt : 0.0;

  FluxDecomposition d;
  d.v_w = lt > 0.0 ? lw.lam / lt * u_t : 0.0;
  d.v_n = lt > 0.0 ? ln.lam / lt * u_t : 0.0;
  d.g_w = trans * lam_prod * (fluid.rho_n - fluid.rho_w) * g * dz;
  d.g_n = -d.g_w;
  d.c_w = -trans * lam_prod * dpc;
  d.c_n = -d.c_w;
  return d;
}

FractionalFlux ppu_fractional_flux(double u_t, double trans, double dz,
                                   const RockRegion& region,
                                   const Fluid& fluid, double s_a,
                                   double s_b) {
  const double g = units::gravity;
  const double delta = (fluid.rho_n - fluid.rho_w) * g * dz -
                       (region.pc.pc(s_a) - region.pc.pc(s_b));
  const UpwindedMobilities up =
      resolve_upwind(u_t, trans, delta, region, fluid, s_a, s_b);
  const double lt = up.w.lam + up.n.lam;
  const double m_w = up.w.lam / lt;
  const double lam_prod = up.w.lam * up.n.lam / lt;

  FractionalFlux out;
  out.fw = m_w * u_t + trans * lam_prod * delta;
  out.d_ut = m_w;

  // branch-wise mobility sensitivities
  const double dm_dlw = up.n.lam / (lt * lt);
  const double dm_dln = -up.w.lam / (lt * lt);
  const double dprod_dlw = (up.n.lam / lt) * (up.n.lam / lt);
  const double dprod_dln = (up.w.lam / lt) * (up.w.lam / lt);

  if (up.w_from_a) {
    out.d_sa += (dm_dlw * u_t + trans * dprod_dlw * delta) * up.w.dlam;
  } else {
    out.d_sb += (dm_dlw * u_t + trans * dprod_dlw * delta) * up.w.dlam;
  }
  if (up.n_from_a) {
    out.d_sa += (dm_dln * u_t + trans * dprod_dln * delta) * up.n.dlam;
  } else {
    out.d_sb += (dm_dln * u_t + trans * dprod_dln * delta) * up.n.dlam;
  }
  out.d_sa += trans * lam_prod * (-region.pc.dpc(s_a));
  out.d_sb += trans * lam_prod * region.pc.dpc(s_b);
  return out;
}

IhuViscous ihu_viscous(double u_t, const RockRegion& region,
                       const Fluid& fluid, double s_a, double s_b) {
  const bool from_a = u_t >= 0.0;  // a-side branch at the tie
  const double s_up = from_a ? s_a : s_b;
  const Mobility lw = wetting_mobility(region, fluid, s_up);
  const Mobility ln = nonwetting_mobility(region, fluid, s_up);
  const double lt = lw.lam + ln.lam;
  const double m_w = lw.lam / lt;
  const double dm = (lw.dlam * ln.lam - lw.lam * ln.dlam) / (lt * lt);

  IhuViscous out;
  out.v_w = m_w * u_t;
  out.d_ut = m_w;
  (from_a ? out.d_sa : out.d_sb) = dm * u_t;
  return out;
}

SaturationPairValue ihu_gravity(double trans, double dz,
                                const RockRegion& region, const Fluid& fluid,
                                double s_a, double s_b) {
  const double gamma_w = (fluid.rho_n - fluid.rho_w) * units::gravity * dz;
  const bool w_from_a = gamma_w >= 0.0;
  const bool n_from_a = -gamma_w >= 0.0;
  const Mobility lw = wetting_mobility(region, fluid, w_from_a ? s_a : s_b);
  const Mobility ln = nonwetting_mobility(region, fluid, n_from_a ? s_a : s_b);
  const double lt = lw.lam + ln.lam;
  const double dprod_dlw = (ln.lam / lt) * (ln.lam / lt);
  const double dprod_dln = (lw.lam / lt) * (lw.lam / lt);

  SaturationPairValue out;
  out.v = trans * (lw.lam * ln.lam / lt) * gamma_w;
  (w_from_a ? out.d_sa : out.d_sb) += trans * dprod_dlw * lw.dlam * gamma_w;
  (n_from_a ? out.d_sa : out.d_sb) += trans * dprod_dln * ln.dlam * gamma_w;
  return out;
}

SaturationPairValue ihu_capillary(double trans, const DiffusionMaxCache& cache,
                                  double s_a, double s_b) {
  const double lo = std::min(s_a, s_b);
  const double hi = std::max(s_a, s_b);
  const DiffusionMaxCache::IntervalMax m = cache.max_on(lo, hi);
  const double dd_dsa = s_a <= s_b ? m.d_lo : m.d_hi;
  const double dd_dsb = s_a <= s_b ? m.d_hi : m.d_lo;

  SaturationPairValue out;
  out.v = trans * m.value * (s_a - s_b);
  out.d_sa = trans * (dd_dsa * (s_a - s_b) + m.value);
  out.d_sb = trans * (dd_dsb * (s_a - s_b) - m.value);
  return out;
}

FractionalFlux ihu_fractional_flux(double u_t, double trans, double dz,
                                   const RockRegion& region,
                                   const Fluid& fluid,
                                   const DiffusionMaxCache& cache, double s_a,
                                   double s_b) {
  const IhuViscous v = ihu_viscous(u_t, region, fluid, s_a, s_b);
  const SaturationPairValue g = ihu_gravity(trans, dz, region, fluid, s_a, s_b);
  const SaturationPairValue c = ihu_capillary(trans, cache, s_a, s_b);

  FractionalFlux out;
  out.fw = v.v_w + g.v + c.v;
  out.d_ut = v.d_ut;
  out.d_sa = v.d_sa + g.d_sa + c.d_sa;
  out.d_sb = v.d_sb + g.d_sb + c.d_sb;
  return out;
}

FluxEval ihu_interior_flux(const CellPairValue& u_t, double trans, double dz,
                           const RockRegion& region, const Fluid& fluid,
                           const DiffusionMaxCache& cache, double s_i,
                           double s_j) {
  const FractionalFlux f =
      ihu_fractional_flux(u_t.v, trans, dz, region, fluid, cache, s_i, s_j);
  FluxEval out;
  out.ut = u_t;
  out.fw.v = f.fw;
  out.fw.dpi = f.d_ut * u_t.dpi;
  out.fw.dpj = f.d_ut * u_t.dpj;
  out.fw.dsi = f.d_ut * u_t.dsi + f.d_sa;
  out.fw.dsj = f.d_ut * u_t.dsj + f.d_sb;
  out.fn.v = u_t.v - f.fw;
  out.fn.dpi = u_t.dpi - out.fw.dpi;
  out.fn.dpj = u_t.dpj - out.fw.dpj;
  out.fn.dsi = u_t.dsi - out.fw.dsi;
  out.fn.dsj = u_t.dsj - out.fw.dsj;
  return out;
}

}  // namespace fracsim
