#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fracsim/csv.hpp"
#include "fracsim/solver.hpp"

namespace fracsim {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// t_D = k_m D_max t / (phi L^2) with L the full domain length.
double dimensionless_time(double t_seconds, double k_matrix, double d_max,
                          double phi, double length);

/// Recovery percentage vs dimensionless time, normalized by the cumulative
/// non-wetting efflux from the matrix at the end of the run. Requires the
/// run to have reached steady state (relative change in matrix non-wetting
/// volume below steady_tol over the last tenth of the series).
struct RecoverySeries {
  std::vector<double> t_d;
  std::vector<double> pct;

  /// First t_d at which recovery reaches `pct_target` (linear interpolation).
  [[nodiscard]] double time_at_recovery(double pct_target) const;
};
RecoverySeries recovery_curve(const SimulationRecord& rec, double t_char,
                              double steady_tol = 1e-6);

/// Pointwise |R_N - R_ref| on a common t_D grid plus its max (E2).
struct ErrorNorms {
  std::vector<double> t_d;
  std::vector<double> e1;
  double e2 = 0.0;
};
ErrorNorms error_norms(const RecoverySeries& series,
                       const RecoverySeries& reference,
                       const std::vector<double>& sample_t_d);

std::vector<double> log_spaced(double lo, double hi, int n);

/// Leading truncation-error terms evaluated on a monotone cocurrent
/// saturation profile given at uniformly spaced cell centers. Spatial
/// derivatives use central differences, one-sided at the segment ends.
/// The viscous term is common to both upwindings; the capillary terms are
/// scheme-specific and e_vc = e_v + e_c per scheme.
struct TruncationProfile {
  std::vector<double> x;
  std::vector<double> e_v;
  std::vector<double> e_c_ihu, e_c_ppu;
  std::vector<double> e_vc_ihu, e_vc_ppu;
};
TruncationProfile truncation_terms(std::span<const double> x_centers,
                                   std::span<const double> saturation,
                                   double dx, double u_t, double permeability,
                                   const RockRegion& region,
                                   const Fluid& fluid);

/// Samples F_w(S_L, S_R) for a prescribed total flux on an n x n grid and
/// classifies countercurrent points (F_w F_n < 0). `scheme` ppu or ihu_c
/// selects the kernel; inputs are taken as already nondimensionalized.
CsvTable flux_surface(Scheme scheme, double u_t, double trans,
                      const RockRegion& region, const Fluid& fluid,
                      const DiffusionMaxCache& cache, int n,
                      bool parallel = true);

}  // namespace fracsim
