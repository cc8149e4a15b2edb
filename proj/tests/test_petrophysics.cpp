#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fracsim/petrophysics.hpp"

using namespace fracsim;

namespace {

// Curves in psi/cP units throughout this file; they are unit-agnostic.
RockRegion make_matrix(int exponent = 2) {
  RockRegion r;
  r.id = RegionId::matrix;
  r.krw = {exponent};
  r.krn = {exponent};
  r.pc = CapillaryCurve(fit_pc_bounds(3.0, 4.0, 15.0, -15.0));
  r.porosity = 0.2;
  r.permeability = 1.0;
  return r;
}

RockRegion make_fracture(double p_max = 0.1) {
  RockRegion r;
  r.id = RegionId::fracture;
  r.krw = {1};
  r.krn = {1};
  r.pc = CapillaryCurve(FractureCapillaryCurve{p_max});
  r.porosity = 0.2;
  r.permeability = 1.0;
  return r;
}

const Fluid unit_fluid{1.0, 1.0, 1000.0, 800.0};

// Brute-force oracle for interval maxima of the diffusion coefficient.
double scan_max(const RockRegion& r, double lo, double hi, int n) {
  double best = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = lo + (hi - lo) * k / n;
    best = std::max(best, capillary_diffusion(r, unit_fluid, s).first);
  }
  return best;
}

}  // namespace

TEST_CASE("relative permeability endpoints and analytic values") {
  const RelPermCurve quad{2};
  const RelPermCurve cubic{3};
  CHECK(quad.eval(0.0).first == 0.0);
  CHECK(quad.eval(0.0).second == 0.0);
  CHECK(quad.eval(1.0).first == 1.0);
  CHECK(quad.eval(0.5).first == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(quad.eval(0.5).second == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cubic.eval(0.3).first == doctest::Approx(0.027).epsilon(1e-15));
  CHECK(cubic.eval(0.3).second == doctest::Approx(0.27).epsilon(1e-15));
  CHECK_THROWS_AS((void)quad.eval(-0.01), std::domain_error);
  CHECK_THROWS_AS((void)quad.eval(1.01), std::domain_error);
}

TEST_CASE("matrix capillary pressure on the interior branch") {
  const RockRegion m = make_matrix();
  CHECK(m.pc.pc(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.pc.pc(0.2) == doctest::Approx(1.3139325533419693).epsilon(1e-13));
  CHECK(m.pc.dpc(0.5) == doctest::Approx(-3.5676213450081632).epsilon(1e-13));
}

TEST_CASE("fracture capillary pressure is linear") {
  const RockRegion f = make_fracture();
  CHECK(f.pc.pc(1.0) == 0.0);
  CHECK(f.pc.pc(0.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(f.pc.dpc(1.0) == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("fit_pc_bounds hits the prescribed endpoint bounds") {
  const MatrixCapillaryCurve c = fit_pc_bounds(3.0, 4.0, 15.0, -15.0);
  CHECK(c.pc(0.0) == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(c.pc(1.0) == doctest::Approx(-15.0).epsilon(1e-14));
  CHECK(c.s_minus > 0.0);
  CHECK(c.s_minus < 0.5);
  CHECK(c.s_plus > 0.5);
  CHECK(c.s_plus < 1.0);
  // symmetric bounds give a symmetric construction
  CHECK(c.s_plus == doctest::Approx(1.0 - c.s_minus).epsilon(1e-10));

  // construction residuals: value and slope match at the switch
  const double e = -1.0 / c.theta;
  const double raw = 3.0 * (std::pow(c.s_minus, e) - std::pow(1.0 - c.s_minus, e));
  const double raw_d = 3.0 * e *
                       (std::pow(c.s_minus, e - 1.0) + std::pow(1.0 - c.s_minus, e - 1.0));
  CHECK(c.pc(c.s_minus) == doctest::Approx(raw).epsilon(1e-10));
  CHECK(c.dpc(c.s_minus) == doctest::Approx(raw_d).epsilon(1e-10));
}

TEST_CASE("fit_pc_bounds rejects unreachable bounds") {
  // Tighter than the curve value at S = 1/2 slope scale: no root.
  CHECK_THROWS_AS(fit_pc_bounds(3.0, 4.0, 0.5, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(fit_pc_bounds(-1.0, 4.0, 15.0, -15.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_pc_bounds(3.0, 0.5, 15.0, -15.0), std::invalid_argument);
}

TEST_CASE("composite curve is C2 at the patch joins") {
  const RockRegion m = make_matrix();
  const MatrixCapillaryCurve& c = m.pc.matrix();
  const double e = -1.0 / c.theta;
  auto raw = [&](double s) {
    return c.entry_pressure * (std::pow(s, e) - std::pow(1.0 - s, e));
  };
  auto raw_d = [&](double s) {
    return c.entry_pressure * e * (std::pow(s, e - 1.0) + std::pow(1.0 - s, e - 1.0));
  };
  auto raw_dd = [&](double s) {
    return c.entry_pressure * e * (e - 1.0) *
           (std::pow(s, e - 2.0) - std::pow(1.0 - s, e - 2.0));
  };
  // branch values coincide at the joins up to the root solve
  const double left_patch_v = (c.a * c.s_minus + c.b) * c.s_minus + c.pc_max;
  CHECK(left_patch_v == doctest::Approx(raw(c.s_minus)).epsilon(1e-10));
  CHECK(2.0 * c.a * c.s_minus + c.b ==
        doctest::Approx(raw_d(c.s_minus)).epsilon(1e-10));
  CHECK(2.0 * c.a == doctest::Approx(raw_dd(c.s_minus)).epsilon(1e-10));
  const double u = 1.0 - c.s_plus;
  CHECK((c.c * u + c.d) * u + c.pc_min ==
        doctest::Approx(raw(c.s_plus)).epsilon(1e-10));
  CHECK(-(2.0 * c.c * u + c.d) == doctest::Approx(raw_d(c.s_plus)).epsilon(1e-10));
  CHECK(2.0 * c.c == doctest::Approx(raw_dd(c.s_plus)).epsilon(1e-10));

  // finite-difference view across the joins: one-sided slopes of Pc agree
  // to 1e-5 relative, one-sided curvatures to 1e-6 relative
  for (double s_join : {c.s_minus, c.s_plus}) {
    const double h = 1e-9;
    const double slope_l = (m.pc.pc(s_join) - m.pc.pc(s_join - h)) / h;
    const double slope_r = (m.pc.pc(s_join + h) - m.pc.pc(s_join)) / h;
    CHECK(std::abs(slope_l - slope_r) / std::abs(slope_l) < 1e-5);
    const double h2 = 2e-9;
    const double curv_l = (m.pc.dpc(s_join) - m.pc.dpc(s_join - h2)) / h2;
    const double curv_r = (m.pc.dpc(s_join + h2) - m.pc.dpc(s_join)) / h2;
    CHECK(std::abs(curv_l - curv_r) / std::abs(curv_l) < 1e-6);
  }
}

TEST_CASE("bounded curve monotone decreasing and inside bounds") {
  const RockRegion m = make_matrix();
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    double s1 = u(rng), s2 = u(rng);
    if (s1 > s2) std::swap(s1, s2);
    if (s2 - s1 < 1e-12) continue;
    CHECK(m.pc.pc(s1) > m.pc.pc(s2));
    CHECK(m.krw.eval(s1).first < m.krw.eval(s2).first);
  }
  for (int k = 0; k <= 10000; ++k) {
    const double s = k / 10000.0;
    const double v = m.pc.pc(s);
    CHECK(v <= 15.0 + 1e-12);
    CHECK(v >= -15.0 - 1e-12);
  }
}

TEST_CASE("capillary diffusion vanishes exactly at the endpoints") {
  const RockRegion m = make_matrix();
  CHECK(capillary_diffusion(m, unit_fluid, 0.0).first == 0.0);
  CHECK(capillary_diffusion(m, unit_fluid, 1.0).first == 0.0);
  for (double s : {0.1, 0.3, 0.5, 0.9}) {
    CHECK(capillary_diffusion(m, unit_fluid, s).first > 0.0);
  }
}

TEST_CASE("diffusion derivative matches finite differences") {
  const RockRegion m = make_matrix();
  for (double s : {0.05, 0.2, 0.5, 0.77, 0.95}) {
    const double h = 1e-7;
    const double fd = (capillary_diffusion(m, unit_fluid, s + h).first -
                       capillary_diffusion(m, unit_fluid, s - h).first) /
                      (2.0 * h);
    const double an = capillary_diffusion(m, unit_fluid, s).second;
    CHECK(an == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("interval diffusion maximum agrees with brute force") {
  for (int exponent : {2, 3}) {
    const RockRegion m = make_matrix(exponent);
    const DiffusionMaxCache cache(m, unit_fluid);

    const double global_scan = scan_max(m, 0.0, 1.0, 100000);
    CHECK(cache.global_max() == doctest::Approx(global_scan).epsilon(1e-8));
    CHECK(cache.max_on(0.0, 1.0).value ==
          doctest::Approx(global_scan).epsilon(1e-8));

    // degenerate interval
    const double d_mid = capillary_diffusion(m, unit_fluid, 0.37).first;
    CHECK(cache.max_on(0.37, 0.37).value == doctest::Approx(d_mid).epsilon(1e-14));

    // monotone sub-branch strictly left of the interior argmax
    const double s_arg = cache.critical_saturations().front();
    const double hi = 0.8 * s_arg;
    const auto m_left = cache.max_on(0.1 * s_arg, hi);
    CHECK(m_left.value ==
          doctest::Approx(capillary_diffusion(m, unit_fluid, hi).first).epsilon(1e-12));
    CHECK(m_left.d_hi ==
          doctest::Approx(capillary_diffusion(m, unit_fluid, hi).second).epsilon(1e-12));
    CHECK(m_left.d_lo == 0.0);

    std::mt19937 rng(7 + exponent);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
      double lo = u(rng), hi2 = u(rng);
      if (lo > hi2) std::swap(lo, hi2);
      const double oracle = scan_max(m, lo, hi2, 20000);
      CHECK(cache.max_on(lo, hi2).value ==
            doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("extended capillary pressure clamps to the fracture range") {
  const RockRegion m = make_matrix();
  const RockRegion f = make_fracture();
  CHECK(extended_pc(m, 0.5, f) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(extended_pc(m, 0.01, f) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(extended_pc(m, 0.99, f) == doctest::Approx(0.0).epsilon(1e-14));
  // fracture-side extended pressure is its own curve
  CHECK(extended_pc(f, 0.3, m) == doctest::Approx(f.pc.pc(0.3)).epsilon(1e-14));
}

TEST_CASE("capillary inversion") {
  const RockRegion m = make_matrix();
  const RockRegion f = make_fracture();
  CHECK(f.pc.inverse(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.pc.inverse(0.05) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.pc.inverse(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS((void)m.pc.inverse(16.0), std::range_error);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double s = u(rng);
    const double back = m.pc.inverse(m.pc.pc(s));
    CHECK(back == doctest::Approx(s).epsilon(1e-10));
  }
}
