#pragma once

#include <vector>

#include "fracsim/petrophysics.hpp"

namespace fracsim {

/// One cell interface with its precomputed static coefficients.
/// Depth differences follow dz = z_i - z_j; the half differences are
/// measured from each cell center to the interface (z_cell - z_face).
struct CellInterface {
  int i = 0;
  int j = 0;
  double trans = 0.0;   // harmonic average of the one-sided halves
  double t_hat_i = 0.0; // k_i A / d_{i,(ij)}
  double t_hat_j = 0.0;
  double dz = 0.0;
  double dz_half_i = 0.0;
  double dz_half_j = 0.0;
  bool region_boundary = false;
};

/// Uniform-per-region 1D grid with geometry, region tags, pore volumes
/// (fracture amplification included) and static transmissibilities.
/// Immutable after construction.
struct Grid1D {
  int n_cells = 0;
  double area = 1.0;
  double length = 0.0;
  std::vector<double> dx;
  std::vector<double> x_center;
  std::vector<double> z;            // positive downward
  std::vector<double> pore_volume;  // includes any amplification factor
  std::vector<double> perm;         // m^2
  std::vector<RegionId> region;
  std::vector<CellInterface> interfaces;

  [[nodiscard]] int first_cell_of(RegionId r) const;
  [[nodiscard]] int last_cell_of(RegionId r) const;
};

/// Matrix on [0, L/2], fracture on [L/2, L], horizontal, each half gridded
/// uniformly; fracture pore volumes amplified by pv_multiplier.
Grid1D build_spontaneous_grid(int n_matrix, int n_fracture, double length,
                              double k_matrix, double k_fracture,
                              double phi_matrix, double phi_fracture,
                              double pv_multiplier, double area = 1.0);

/// Fracture on [0, L/4] and [3L/4, L], matrix in between, equal cell sizes
/// throughout (n_matrix must be even so each fracture quarter holds
/// n_matrix/2 cells); depth decreases left to right by dx*sin(tilt).
Grid1D build_forced_grid(int n_matrix, double length, double k_matrix,
                         double k_fracture, double phi_matrix,
                         double phi_fracture, double tilt_deg,
                         double area = 1.0);

}  // namespace fracsim
