#pragma once

#include "fracsim/flux.hpp"
#include "fracsim/petrophysics.hpp"

namespace fracsim {

enum class Scheme { ppu, ppu_c, ihu_c };

/// Fracture-side interface saturation implied by the extended-pressure
/// equality, S_f = (Pc_f)^{-1}(clamped Pc_m(S_m)), with its derivative.
/// dh vanishes on the clamped branches.
struct HMapResult {
  double s_f = 0.0;
  double dh = 0.0;
};
HMapResult h_map(double s_m, const RockRegion& matrix,
                 const RockRegion& fracture);

struct InterfaceSolveInput {
  Scheme scheme = Scheme::ihu_c;  // ppu_c or ihu_c
  double u_t = 0.0;               // total flux i -> j, held fixed
  double s_i = 0.0, s_j = 0.0;
  double t_hat_i = 0.0, t_hat_j = 0.0;
  double dz_half_i = 0.0, dz_half_j = 0.0;  // cell center minus interface
  const RockRegion* region_i = nullptr;
  const RockRegion* region_j = nullptr;
  const DiffusionMaxCache* cache_i = nullptr;
  const DiffusionMaxCache* cache_j = nullptr;
  const Fluid* fluid = nullptr;
  // Convergence per the local algorithm: |R| * dt / (phi_i V_i + phi_j V_j)
  // below tol; pass sum_pv / dt here.
  double pv_per_time = 1.0;
  double tol = 1e-9;
  int max_iter = 50;
};

struct InterfaceSolveResult {
  double s_m = 0.0;  // matrix-side interface saturation (primary unknown)
  double s_f = 0.0;
  double fw = 0.0;        // wetting flux i -> j (left one-sided flux)
  double fw_right = 0.0;  // right one-sided flux (j toward the interface)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool clamped = false;  // endpoint root: one-phase-dominated throughput
  bool matrix_is_i = true;
  double dh = 0.0;
  FractionalFlux left, right;  // kernels at the solution, for sensitivities
};

/// Solves the scalar interface residual
///   R(d) = F_w,ij(u_t, s_i, face_i(d)) + F_w,ji(-u_t, s_j, face_j(d)) = 0
/// with d the matrix-side interface saturation and the other side slaved
/// through the extended-pressure map. Safeguarded Newton on the bracket
/// [0,1]; if R has one sign over the whole bracket the nearest endpoint is
/// returned with the clamped flag set.
InterfaceSolveResult solve_interface(const InterfaceSolveInput& in);

struct InterfaceSensitivities {
  CellPairValue fw;   // assembled interface wetting flux
  CellPairValue s_m;  // implicit-function-theorem sensitivities of d
};

/// Propagates the converged local solve into global-variable derivatives.
/// Left-cell variables differentiate through the left flux and right-cell
/// variables through the right flux; both chain through u_t(dp, s_i, s_j).
InterfaceSensitivities interface_sensitivities(const InterfaceSolveInput& in,
                                               const InterfaceSolveResult& r,
                                               const CellPairValue& u_t);

}  // namespace fracsim
