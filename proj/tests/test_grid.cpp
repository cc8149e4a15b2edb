#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracsim/grid.hpp"
#include "fracsim/units.hpp"

using namespace fracsim;
using units::millidarcy;

TEST_CASE("two-cell spontaneous grid") {
  const Grid1D g = build_spontaneous_grid(1, 1, 20.0, 1.0 * millidarcy,
                                          1e5 * millidarcy, 0.2, 0.2, 100.0);
  CHECK(g.n_cells == 2);
  CHECK(g.dx[0] == doctest::Approx(10.0));
  CHECK(g.dx[1] == doctest::Approx(10.0));
  CHECK(g.region[0] == RegionId::matrix);
  CHECK(g.region[1] == RegionId::fracture);
  REQUIRE(g.interfaces.size() == 1);
  CHECK(g.interfaces[0].region_boundary);
  CHECK(g.pore_volume[0] == doctest::Approx(0.2 * 10.0));
  CHECK(g.pore_volume[1] == doctest::Approx(0.2 * 10.0 * 100.0));

  // matrix-fracture transmissibility from the one-sided harmonic average
  const double t_hat_m = 1.0 * millidarcy / 5.0;
  const double t_hat_f = 1e5 * millidarcy / 5.0;
  const double expected = 1.0 / (1.0 / t_hat_m + 1.0 / t_hat_f);
  CHECK(g.interfaces[0].trans == doctest::Approx(expected).epsilon(1e-14));
  CHECK(g.interfaces[0].trans ==
        doctest::Approx(2.0 * millidarcy / 10.0 / (1.0 + 1e-5)).epsilon(1e-12));
}

TEST_CASE("matrix-interior transmissibility of equal cells") {
  const Grid1D g = build_spontaneous_grid(4, 4, 20.0, 1.0 * millidarcy,
                                          1e5 * millidarcy, 0.2, 0.2, 100.0);
  const double dx = 2.5;
  CHECK(g.interfaces[0].trans ==
        doctest::Approx(1.0 * millidarcy / dx).epsilon(1e-14));
  for (const auto& f : g.interfaces) {
    CHECK(1.0 / (1.0 / f.t_hat_i + 1.0 / f.t_hat_j) ==
          doctest::Approx(f.trans).epsilon(1e-14));
  }
  int boundaries = 0;
  for (const auto& f : g.interfaces) boundaries += f.region_boundary ? 1 : 0;
  CHECK(boundaries == 1);
}

TEST_CASE("matrix pore volume sums exactly") {
  const Grid1D g = build_spontaneous_grid(7, 3, 20.0, 1.0 * millidarcy,
                                          1e5 * millidarcy, 0.17, 0.2, 100.0);
  double pv = 0.0;
  for (int i = 0; i < g.n_cells; ++i) {
    if (g.region[i] == RegionId::matrix) pv += g.pore_volume[i];
  }
  CHECK(pv == doctest::Approx(0.17 * 10.0).epsilon(1e-14));
}

TEST_CASE("forced grid layout and tilt geometry") {
  const Grid1D g = build_forced_grid(10, 20.0, 1.0 * millidarcy,
                                     1e5 * millidarcy, 0.2, 0.2, 15.0);
  CHECK(g.n_cells == 20);
  for (int i = 0; i < 20; ++i) {
    const bool frac = i < 5 || i >= 15;
    CHECK((g.region[i] == RegionId::fracture) == frac);
    CHECK(g.dx[i] == doctest::Approx(1.0));
    CHECK(g.pore_volume[i] == doctest::Approx(0.2));
  }
  int boundaries = 0;
  for (const auto& f : g.interfaces) boundaries += f.region_boundary ? 1 : 0;
  CHECK(boundaries == 2);

  const double dzd = std::sin(15.0 * M_PI / 180.0);
  for (const auto& f : g.interfaces) {
    CHECK(f.dz == doctest::Approx(dzd).epsilon(1e-12));  // right side shallower
    CHECK(f.dz_half_i == doctest::Approx(0.5 * dzd).epsilon(1e-12));
    CHECK(f.dz_half_j == doctest::Approx(-0.5 * dzd).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_forced_grid(9, 20.0, 1.0, 1e5, 0.2, 0.2, 15.0),
                  std::invalid_argument);
}

TEST_CASE("zero tilt gives a horizontal forced grid") {
  const Grid1D g = build_forced_grid(4, 20.0, 1.0 * millidarcy,
                                     1e5 * millidarcy, 0.2, 0.2, 0.0);
  for (const auto& f : g.interfaces) CHECK(f.dz == 0.0);
}
