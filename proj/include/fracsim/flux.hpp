#pragma once

#include "fracsim/petrophysics.hpp"

namespace fracsim {

/// A value with its partial derivatives w.r.t. the two cells' primary
/// variables (p_i, p_j, S_i, S_j).
struct CellPairValue {
  double v = 0.0;
  double dpi = 0.0;
  double dpj = 0.0;
  double dsi = 0.0;
  double dsj = 0.0;
};

/// Per-interface phase fluxes plus analytic derivatives. Positive flux
/// leaves cell i toward cell j. fw + fn = ut holds for fractional-flow
/// evaluations and for the potential-form PPU flux alike.
struct FluxEval {
  CellPairValue fw;
  CellPairValue fn;
  CellPairValue ut;
};

/// Standard phase-potential-upwinded flux between two cells, each with its
/// own region curves; no special treatment at region boundaries. Ties
/// (zero potential difference) take the i-side mobility branch.
FluxEval ppu_flux(double trans, double dz, const RockRegion& region_i,
                  const RockRegion& region_j, const Fluid& fluid, double p_i,
                  double p_j, double s_i, double s_j);

/// Total velocity u_T = F_w + F_n of the PPU flux.
CellPairValue ppu_total_velocity(double trans, double dz,
                                 const RockRegion& region_i,
                                 const RockRegion& region_j,
                                 const Fluid& fluid, double p_i, double p_j,
                                 double s_i, double s_j);

/// Viscous/buoyancy/capillary split of the PPU flux; V + G + C equals the
/// potential-form flux to round-off, per phase.
struct FluxDecomposition {
  double v_w = 0.0, g_w = 0.0, c_w = 0.0;
  double v_n = 0.0, g_n = 0.0, c_n = 0.0;
};
FluxDecomposition ppu_fractional_decomposition(double trans, double dz,
                                               const RockRegion& region_i,
                                               const RockRegion& region_j,
                                               const Fluid& fluid, double p_i,
                                               double p_j, double s_i,
                                               double s_j);

/// Wetting flux in fractional-flow form between a cell state `s_a` and a
/// downstream state `s_b` in the same rock region, for a prescribed total
/// flux. Used for the one-sided fluxes of the interface conditions, the
/// IHU interior flux, and the flux-surface sampling.
struct FractionalFlux {
  double fw = 0.0;
  double d_ut = 0.0;
  double d_sa = 0.0;
  double d_sb = 0.0;
};

/// PPU kernel: per-phase upwinding with the upwind directions resolved
/// consistently from the total flux and the gravity/capillary potential
/// difference (no explicit pressure drop).
FractionalFlux ppu_fractional_flux(double u_t, double trans, double dz,
                                   const RockRegion& region,
                                   const Fluid& fluid, double s_a, double s_b);

struct IhuViscous {
  double v_w = 0.0;
  double d_ut = 0.0;
  double d_sa = 0.0;
  double d_sb = 0.0;
};
/// Viscous part: both mobilities upwinded by the sign of the total flux.
/// At u_t = 0 the flux vanishes and derivatives use the a-side branch.
IhuViscous ihu_viscous(double u_t, const RockRegion& region,
                       const Fluid& fluid, double s_a, double s_b);

struct SaturationPairValue {
  double v = 0.0;
  double d_sa = 0.0;
  double d_sb = 0.0;
};
/// Buoyancy part: each phase upwinded independently by the sign of its
/// density-difference driving term. Returns the wetting flux (G_n = -G_w).
SaturationPairValue ihu_gravity(double trans, double dz,
                                const RockRegion& region, const Fluid& fluid,
                                double s_a, double s_b);

/// Capillary part C_w = T * D_ab * (s_a - s_b) with D_ab the maximum of
/// the diffusion coefficient over the saturation interval (C_n = -C_w).
/// Bounded by T * D_max of the region, and monotone in both saturations.
SaturationPairValue ihu_capillary(double trans, const DiffusionMaxCache& cache,
                                  double s_a, double s_b);

/// Full IHU wetting flux V + G + C for a prescribed total flux.
FractionalFlux ihu_fractional_flux(double u_t, double trans, double dz,
                                   const RockRegion& region,
                                   const Fluid& fluid,
                                   const DiffusionMaxCache& cache, double s_a,
                                   double s_b);

/// Interior IHU flux between cells i and j of the same region, chaining the
/// prescribed total-velocity bundle through the fractional-flow kernel.
FluxEval ihu_interior_flux(const CellPairValue& u_t, double trans, double dz,
                           const RockRegion& region, const Fluid& fluid,
                           const DiffusionMaxCache& cache, double s_i,
                           double s_j);

}  // namespace fracsim
