#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracsim/analysis.hpp"
#include "fracsim/scenarios.hpp"

using namespace fracsim;

TEST_CASE("dimensionless time scaling") {
  CHECK(dimensionless_time(0.0, 1e-15, 3e6, 0.2, 20.0) == 0.0);
  const double base = dimensionless_time(5e8, 1e-15, 3e6, 0.2, 20.0);
  CHECK(dimensionless_time(5e8, 1e-15, 3e6, 0.2, 40.0) ==
        doctest::Approx(0.25 * base).epsilon(1e-14));
  CHECK(dimensionless_time(5e8, 4e-15, 3e6, 0.2, 40.0) ==
        doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("recovery curve normalization and steady-state gate") {
  SimulationRecord rec;
  rec.completed = true;
  // synthetic exponential approach to equilibrium
  const double v0 = 2.0, v_inf = 1.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = k * 1e7;
    rec.time.push_back(t);
    rec.matrix_nonwetting.push_back(v_inf + (v0 - v_inf) * std::exp(-t / 2e8));
  }
  const RecoverySeries rs = recovery_curve(rec, 1e9);
  CHECK(rs.pct.back() == doctest::Approx(100.0));
  CHECK(rs.pct.front() == doctest::Approx(0.0));
  const double t50 = rs.time_at_recovery(50.0);
  CHECK(t50 == doctest::Approx(2e8 * std::log(2.0) / 1e9).epsilon(1e-3));

  SimulationRecord young = rec;
  young.time.resize(40);
  young.matrix_nonwetting.resize(40);
  CHECK_THROWS_AS((void)recovery_curve(young, 1e9), AnalysisError);
}

TEST_CASE("error norms of identical and shifted series") {
  RecoverySeries a;
  for (int k = 0; k <= 100; ++k) {
    a.t_d.push_back(0.008 * k);
    a.pct.push_back(k);
  }
  RecoverySeries b = a;
  const std::vector<double> grid = log_spaced(1e-3, 0.8, 50);
  const ErrorNorms zero = error_norms(a, b, grid);
  CHECK(zero.e2 == 0.0);
  for (double e : zero.e1) CHECK(e == 0.0);

  for (double& v : b.pct) v += 2.5;
  const ErrorNorms shifted = error_norms(a, b, grid);
  CHECK(shifted.e2 == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(shifted.e2 >= *std::max_element(shifted.e1.begin(), shifted.e1.end()) - 1e-15);
}

TEST_CASE("truncation terms vanish on a uniform profile") {
  ScenarioConfig cfg = default_forced();
  BuiltScenario sc = build_scenario(cfg);
  std::vector<double> x(8), s(8, 0.6);
  for (int k = 0; k < 8; ++k) x[k] = 0.3 + 0.05 * k;
  const TruncationProfile tp = truncation_terms(
      x, s, 1.0, 1e-9, sc.problem.matrix.permeability, sc.problem.matrix,
      sc.problem.fluid);
  for (int k = 0; k < 8; ++k) {
    CHECK(tp.e_v[k] == 0.0);
    CHECK(tp.e_c_ihu[k] == 0.0);
    CHECK(tp.e_c_ppu[k] == 0.0);
    CHECK(tp.e_vc_ihu[k] == tp.e_v[k] + tp.e_c_ihu[k]);
  }
}

TEST_CASE("truncation identity and ppu-vs-ihu sign flip near the inflection") {
  ScenarioConfig cfg = default_forced();
  BuiltScenario sc = build_scenario(cfg);
  // monotone profile crossing the capillary inflection at S = 1/2
  std::vector<double> x, s;
  for (int k = 0; k < 12; ++k) {
    x.push_back(0.3 + 0.04 * k);
    s.push_back(0.80 - 0.028 * k);
  }
  const TruncationProfile tp =
      truncation_terms(x, s, 0.8, 2e-9, sc.problem.matrix.permeability,
                       sc.problem.matrix, sc.problem.fluid);
  int flipped_near_inflection = 0;
  for (std::size_t k = 0; k < tp.x.size(); ++k) {
    CHECK(tp.e_vc_ihu[k] ==
          doctest::Approx(tp.e_v[k] + tp.e_c_ihu[k]).epsilon(1e-14));
    CHECK(tp.e_vc_ppu[k] ==
          doctest::Approx(tp.e_v[k] + tp.e_c_ppu[k]).epsilon(1e-14));
    if (std::abs(s[k] - 0.5) < 0.06 && tp.e_c_ihu[k] * tp.e_c_ppu[k] < 0.0) {
      ++flipped_near_inflection;
    }
  }
  CHECK(flipped_near_inflection >= 1);

  // non-monotone segment is rejected
  std::vector<double> bad = s;
  bad[5] = 0.9;
  CHECK_THROWS_AS(
      (void)truncation_terms(x, bad, 0.8, 2e-9,
                             sc.problem.matrix.permeability, sc.problem.matrix,
                             sc.problem.fluid),
      AnalysisError);
}

TEST_CASE("flux surface table shape and bound") {
  RockRegion region;
  region.id = RegionId::matrix;
  region.krw = {2};
  region.krn = {2};
  region.pc = CapillaryCurve(fit_pc_bounds(3.0, 4.0, 15.0, -15.0));
  region.porosity = 0.2;
  region.permeability = 1.0;
  const Fluid fluid{1.0, 1.0, 0.0, 0.0};
  const DiffusionMaxCache cache(region, fluid);

  const int n = 50;
  const CsvTable t = flux_surface(Scheme::ihu_c, 0.0, 1.0, region, fluid, cache, n);
  REQUIRE(t.columns.size() == 5);
  CHECK(t.columns[0].size() == static_cast<std::size_t>(n * n));
  double max_abs = 0.0;
  for (std::size_t r = 0; r < t.columns[2].size(); ++r) {
    max_abs = std::max(max_abs, std::abs(t.columns[2][r]));
    // u_t = 0 diagonal: zero flux when both saturations equal
    if (t.columns[0][r] == t.columns[1][r]) CHECK(t.columns[2][r] == 0.0);
  }
  CHECK(max_abs <= cache.global_max() + 1e-12);
}
