#include "fracsim/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracsim {

namespace {

void finish_interfaces(Grid1D& g) {
  g.interfaces.clear();
  g.interfaces.reserve(g.n_cells - 1);
  for (int i = 0; i + 1 < g.n_cells; ++i) {
    const int j = i + 1;
    CellInterface f;
    f.i = i;
    f.j = j;
    f.t_hat_i = g.perm[i] * g.area / (0.5 * g.dx[i]);
    f.t_hat_j = g.perm[j] * g.area / (0.5 * g.dx[j]);
    f.trans = 1.0 / (1.0 / f.t_hat_i + 1.0 / f.t_hat_j);
    const double x_face = g.x_center[i] + 0.5 * g.dx[i];
    const double z_face =
        g.z[i] + (g.z[j] - g.z[i]) * (x_face - g.x_center[i]) /
                     (g.x_center[j] - g.x_center[i]);
    f.dz = g.z[i] - g.z[j];
    f.dz_half_i = g.z[i] - z_face;
    f.dz_half_j = g.z[j] - z_face;
    f.region_boundary = g.region[i] != g.region[j];
    g.interfaces.push_back(f);
  }
}

}  // namespace

int Grid1D::first_cell_of(RegionId r) const {
  for (int i = 0; i < n_cells; ++i) {
    if (region[i] == r) return i;
  }
  return -1;
}

int Grid1D::last_cell_of(RegionId r) const {
  for (int i = n_cells - 1; i >= 0; --i) {
    if (region[i] == r) return i;
  }
  return -1;
}

Grid1D build_spontaneous_grid(int n_matrix, int n_fracture, double length,
                              double k_matrix, double k_fracture,
                              double phi_matrix, double phi_fracture,
                              double pv_multiplier, double area) {
  if (n_matrix < 1 || n_fracture < 1) {
    throw std::invalid_argument("spontaneous grid needs at least one cell per half");
  }
  Grid1D g;
  g.n_cells = n_matrix + n_fracture;
  g.area = area;
  g.length = length;
  const double dxm = 0.5 * length / n_matrix;
  const double dxf = 0.5 * length / n_fracture;
  for (int i = 0; i < n_matrix; ++i) {
    g.dx.push_back(dxm);
    g.x_center.push_back((i + 0.5) * dxm);
    g.z.push_back(0.0);
    g.perm.push_back(k_matrix);
    g.region.push_back(RegionId::matrix);
    g.pore_volume.push_back(phi_matrix * area * dxm);
  }
  for (int i = 0; i < n_fracture; ++i) {
    g.dx.push_back(dxf);
    g.x_center.push_back(0.5 * length + (i + 0.5) * dxf);
    g.z.push_back(0.0);
    g.perm.push_back(k_fracture);
    g.region.push_back(RegionId::fracture);
    g.pore_volume.push_back(phi_fracture * area * dxf * pv_multiplier);
  }
  finish_interfaces(g);
  return g;
}

Grid1D build_forced_grid(int n_matrix, double length, double k_matrix,
                         double k_fracture, double phi_matrix,
                         double phi_fracture, double tilt_deg, double area) {
  if (n_matrix < 2 || n_matrix % 2 != 0) {
    throw std::invalid_argument(
        "forced grid needs an even n_matrix >= 2 so each fracture quarter "
        "holds n_matrix/2 equal cells");
  }
  Grid1D g;
  const int n_quarter = n_matrix / 2;
  g.n_cells = 2 * n_matrix;  // quarter + half + quarter, equal dx
  g.area = area;
  g.length = length;
  const double dx = length / g.n_cells;
  const double sin_tilt = std::sin(tilt_deg * std::numbers::pi / 180.0);
  for (int i = 0; i < g.n_cells; ++i) {
    const double xc = (i + 0.5) * dx;
    const bool in_matrix = i >= n_quarter && i < n_quarter + n_matrix;
    g.dx.push_back(dx);
    g.x_center.push_back(xc);
    g.z.push_back(-xc * sin_tilt);  // updip left to right
    g.perm.push_back(in_matrix ? k_matrix : k_fracture);
    g.region.push_back(in_matrix ? RegionId::matrix : RegionId::fracture);
    g.pore_volume.push_back((in_matrix ? phi_matrix : phi_fracture) * area * dx);
  }
  finish_interfaces(g);
  return g;
}

}  // namespace fracsim
