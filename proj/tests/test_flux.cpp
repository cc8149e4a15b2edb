#include <doctest.h>

#include <cmath>
#include <random>

#include "fracsim/flux.hpp"
#include "fracsim/units.hpp"

using namespace fracsim;

namespace {

RockRegion psi_matrix(int exponent = 2) {
  RockRegion r;
  r.id = RegionId::matrix;
  r.krw = {exponent};
  r.krn = {exponent};
  r.pc = CapillaryCurve(fit_pc_bounds(3.0, 4.0, 15.0, -15.0));
  r.porosity = 0.2;
  r.permeability = 1.0;
  return r;
}

const Fluid plot_fluid{1.0, 1.0, 0.0, 0.0};   // psi/cP units, no gravity
const Fluid si_fluid{1e-3, 1e-3, 1000.0, 800.0};

}  // namespace

TEST_CASE("ppu flux vanishes at zero potential difference") {
  const RockRegion m = psi_matrix();
  const FluxEval f = ppu_flux(1.0, 0.0, m, m, plot_fluid, 5.0, 5.0, 0.4, 0.4);
  CHECK(f.fw.v == 0.0);
  CHECK(f.fn.v == 0.0);
  CHECK(f.ut.v == 0.0);
}

TEST_CASE("pure viscous ppu flux is cocurrent with i-side mobilities") {
  const RockRegion m = psi_matrix();
  const double dp = 2.0;
  const FluxEval f = ppu_flux(1.0, 0.0, m, m, plot_fluid, dp, 0.0, 0.3, 0.3);
  const double lam_w = 0.09;  // 0.3^2 / 1 cP
  const double lam_n = 0.49;
  CHECK(f.fw.v == doctest::Approx(lam_w * dp).epsilon(1e-14));
  CHECK(f.fn.v == doctest::Approx(lam_n * dp).epsilon(1e-14));
  CHECK(f.fw.v > 0.0);
  CHECK(f.fn.v > 0.0);
}

TEST_CASE("ppu capillary flux grows without bound toward the endpoints") {
  // pure capillary: equal pressures, flat, matrix curve on both sides
  const RockRegion m = psi_matrix();
  const auto fw = [&](double sl, double sr) {
    return std::abs(ppu_flux(1.0, 0.0, m, m, plot_fluid, 0.0, 0.0, sl, sr).fw.v);
  };
  CHECK(fw(0.99, 0.01) > 10.0 * fw(0.7, 0.3));
}

TEST_CASE("fractional decomposition reproduces the ppu flux") {
  const RockRegion m = psi_matrix();
  const Fluid fluid{1.0, 1.0, 1000.0, 800.0};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double p_i = 10.0 * u(rng), p_j = 10.0 * u(rng);
    const double s_i = u(rng), s_j = u(rng);
    const double dz = 0.2 * (u(rng) - 0.5);
    const FluxEval f = ppu_flux(1.0, dz, m, m, fluid, p_i, p_j, s_i, s_j);
    const FluxDecomposition d =
        ppu_fractional_decomposition(1.0, dz, m, m, fluid, p_i, p_j, s_i, s_j);
    const double scale = std::abs(f.fw.v) + std::abs(f.fn.v) + 1e-30;
    CHECK(std::abs(d.v_w + d.g_w + d.c_w - f.fw.v) / scale < 1e-12);
    CHECK(std::abs(d.v_n + d.g_n + d.c_n - f.fn.v) / scale < 1e-12);
  }
  // no capillary or gravity contrast: V carries the whole flux
  const FluxDecomposition d =
      ppu_fractional_decomposition(1.0, 0.0, m, m, fluid, 3.0, 1.0, 0.4, 0.4);
  CHECK(d.g_w == 0.0);
  CHECK(d.c_w == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("pure countercurrent capillary flow has zero total velocity split") {
  const RockRegion m = psi_matrix();
  // choose dp so the total ppu velocity vanishes, then V must vanish
  const double s_i = 0.3, s_j = 0.7;
  double lo = -20.0, hi = 20.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double ut =
        ppu_total_velocity(1.0, 0.0, m, m, plot_fluid, mid, 0.0, s_i, s_j).v;
    (ut < 0.0 ? lo : hi) = mid;
  }
  const double dp = 0.5 * (lo + hi);
  const FluxEval f = ppu_flux(1.0, 0.0, m, m, plot_fluid, dp, 0.0, s_i, s_j);
  const FluxDecomposition d =
      ppu_fractional_decomposition(1.0, 0.0, m, m, plot_fluid, dp, 0.0, s_i, s_j);
  CHECK(std::abs(f.ut.v) < 1e-10);
  CHECK(std::abs(d.v_w) < 1e-10);
  CHECK(d.c_w == doctest::Approx(f.fw.v).epsilon(1e-6));
}

TEST_CASE("hydrostatic single-phase equilibrium has zero total velocity") {
  const RockRegion m = psi_matrix();
  const double dz = 0.3;
  const double dp = si_fluid.rho_w * units::gravity * dz;
  const CellPairValue ut =
      ppu_total_velocity(1e-15, dz, m, m, si_fluid, dp, 0.0, 1.0, 1.0);
  CHECK(ut.v == doctest::Approx(0.0).scale(1e-15));
}

TEST_CASE("ihu viscous split") {
  const RockRegion m = psi_matrix();
  const IhuViscous v0 = ihu_viscous(0.0, m, plot_fluid, 0.3, 0.8);
  CHECK(v0.v_w == 0.0);
  const IhuViscous v = ihu_viscous(1.0, m, plot_fluid, 0.5, 0.1);
  CHECK(v.v_w == doctest::Approx(0.5).epsilon(1e-14));  // 0.25/(0.25+0.25)
  // fractional-flow identity V_w + V_n = u_t by construction
  const IhuViscous v2 = ihu_viscous(0.7, m, plot_fluid, 0.22, 0.9);
  const Mobility lw = wetting_mobility(m, plot_fluid, 0.22);
  const Mobility ln = nonwetting_mobility(m, plot_fluid, 0.22);
  CHECK(v2.v_w + (0.7 - v2.v_w) == doctest::Approx(0.7));
  CHECK(v2.v_w == doctest::Approx(0.7 * lw.lam / (lw.lam + ln.lam)));
}

TEST_CASE("ihu gravity sign structure") {
  const RockRegion m = psi_matrix();
  const Fluid fluid{1.0, 1.0, 1000.0, 800.0};
  CHECK(ihu_gravity(1.0, 0.0, m, fluid, 0.4, 0.6).v == 0.0);
  // denser wetting phase sinks: wetting flux positive when i is deeper
  const double dz = 0.5;
  const SaturationPairValue g = ihu_gravity(1.0, dz, m, fluid, 0.4, 0.6);
  CHECK(g.v < 0.0);  // (rho_n - rho_w) g dz < 0 drives wetting downward
  const SaturationPairValue g1 = ihu_gravity(1.0, dz, m, fluid, 1.0, 1.0);
  CHECK(g1.v == 0.0);  // single phase: lambda_n = 0 on both sides
}

TEST_CASE("ihu capillary flux is bounded by the diffusion maximum") {
  const RockRegion m = psi_matrix();
  const DiffusionMaxCache cache(m, plot_fluid);
  CHECK(ihu_capillary(1.0, cache, 0.4, 0.4).v == 0.0);
  const SaturationPairValue full = ihu_capillary(1.0, cache, 1.0, 0.0);
  CHECK(full.v == doctest::Approx(cache.global_max()).epsilon(1e-12));

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double a = u(rng), b = u(rng);
    const double c = ihu_capillary(2.5, cache, a, b).v;
    CHECK(std::abs(c) <= 2.5 * cache.global_max() + 1e-12);
  }
}

TEST_CASE("ihu and ppu agree for single-phase viscous flow") {
  const RockRegion m = psi_matrix();
  const DiffusionMaxCache cache(m, plot_fluid);
  const FluxEval p = ppu_flux(1.0, 0.0, m, m, plot_fluid, 4.0, 1.0, 1.0, 1.0);
  const FluxEval h =
      ihu_interior_flux(p.ut, 1.0, 0.0, m, plot_fluid, cache, 1.0, 1.0);
  CHECK(h.fw.v == doctest::Approx(p.fw.v).epsilon(1e-14));
  CHECK(h.fn.v == doctest::Approx(p.fn.v).epsilon(1e-14));
}

namespace {

// Reject states within switching distance of an upwind change so central
// finite differences see a smooth branch.
bool near_ppu_switch(const RockRegion& m, const Fluid& fluid, double dz,
                     double p_i, double p_j, double s_i, double s_j,
                     double tol) {
  const double g = units::gravity;
  const double dpc = m.pc.pc(s_i) - m.pc.pc(s_j);
  const double dphi_w = (p_i - p_j) - fluid.rho_w * g * dz - dpc;
  const double dphi_n = (p_i - p_j) - fluid.rho_n * g * dz;
  return std::abs(dphi_w) < tol || std::abs(dphi_n) < tol;
}

}  // namespace

TEST_CASE("analytic derivatives match finite differences") {
  const RockRegion m = psi_matrix();
  const Fluid fluid{1.0, 1.0, 1000.0, 800.0};
  const DiffusionMaxCache cache(m, fluid);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_real_distribution<double> up(-3.0, 3.0);
  const double h = 1e-6;
  int tested = 0;
  for (int k = 0; k < 4000 && tested < 800; ++k) {
    const double p_i = up(rng), p_j = up(rng);
    const double s_i = u(rng), s_j = u(rng);
    const double dz = 0.02 * up(rng);
    if (near_ppu_switch(m, fluid, dz, p_i, p_j, s_i, s_j, 1e-3)) continue;
    if (std::abs(s_i - s_j) < 1e-3) continue;

    const FluxEval f = ppu_flux(1.0, dz, m, m, fluid, p_i, p_j, s_i, s_j);
    const double fw_si =
        (ppu_flux(1.0, dz, m, m, fluid, p_i, p_j, s_i + h, s_j).fw.v -
         ppu_flux(1.0, dz, m, m, fluid, p_i, p_j, s_i - h, s_j).fw.v) /
        (2 * h);
    const double fw_pj =
        (ppu_flux(1.0, dz, m, m, fluid, p_i, p_j + h, s_i, s_j).fw.v -
         ppu_flux(1.0, dz, m, m, fluid, p_i, p_j - h, s_i, s_j).fw.v) /
        (2 * h);
    const double scale = std::abs(f.fw.v) + 1.0;
    CHECK(std::abs(f.fw.dsi - fw_si) / scale < 1e-6);
    CHECK(std::abs(f.fw.dpj - fw_pj) / scale < 1e-6);
    ++tested;
  }
  CHECK(tested >= 500);
}

TEST_CASE("flux monotone in both saturations") {
  const RockRegion m = psi_matrix();
  const DiffusionMaxCache cache(m, plot_fluid);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_real_distribution<double> up(-2.0, 2.0);
  const double h = 1e-5;
  for (int k = 0; k < 1000; ++k) {
    const double s_i = u(rng), s_j = u(rng);
    {
      const double dp = up(rng);
      const double base =
          ppu_flux(1.0, 0.0, m, m, plot_fluid, dp, 0.0, s_i, s_j).fw.v;
      const double bump_i =
          ppu_flux(1.0, 0.0, m, m, plot_fluid, dp, 0.0, std::min(s_i + h, 1.0), s_j).fw.v;
      const double bump_j =
          ppu_flux(1.0, 0.0, m, m, plot_fluid, dp, 0.0, s_i, std::min(s_j + h, 1.0)).fw.v;
      CHECK(bump_i >= base - 1e-12);
      CHECK(bump_j <= base + 1e-12);
    }
    {
      const double ut = up(rng);
      const double base =
          ihu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, cache, s_i, s_j).fw;
      const double bump_i =
          ihu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, cache,
                              std::min(s_i + h, 1.0), s_j).fw;
      const double bump_j =
          ihu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, cache, s_i,
                              std::min(s_j + h, 1.0)).fw;
      CHECK(bump_i >= base - 1e-12);
      CHECK(bump_j <= base + 1e-12);
    }
  }
}

TEST_CASE("countercurrent regions appear in the corners and schemes differ") {
  const RockRegion m = psi_matrix();
  const DiffusionMaxCache cache(m, plot_fluid);
  const double ut = 0.5;
  const int n = 200;
  int cc_ppu_topleft = 0, cc_ppu_bottomright = 0;
  int cc_ihu_topleft = 0, cc_ihu_bottomright = 0;
  int center_disagree = 0;
  for (int a = 0; a < n; ++a) {
    const double sl = static_cast<double>(a) / (n - 1);
    for (int b = 0; b < n; ++b) {
      const double sr = static_cast<double>(b) / (n - 1);
      const double fw_p =
          ppu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, sl, sr).fw;
      const double fw_h =
          ihu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, cache, sl, sr).fw;
      const bool cc_p = fw_p * (ut - fw_p) < 0.0;
      const bool cc_h = fw_h * (ut - fw_h) < 0.0;
      if (sl > 0.7 && sr < 0.3) {
        cc_ppu_topleft += cc_p;
        cc_ihu_topleft += cc_h;
      }
      if (sl < 0.3 && sr > 0.7) {
        cc_ppu_bottomright += cc_p;
        cc_ihu_bottomright += cc_h;
      }
      if (sl >= 0.3 && sl <= 0.7 && sr >= 0.3 && sr <= 0.7 && cc_p != cc_h) {
        ++center_disagree;
      }
    }
  }
  CHECK(cc_ppu_topleft > 0);
  CHECK(cc_ppu_bottomright > 0);
  CHECK(cc_ihu_topleft > 0);
  CHECK(cc_ihu_bottomright > 0);
  CHECK(center_disagree > 0);
}

TEST_CASE("slice along S_L + S_R = 1: ppu diverges, ihu stays bounded") {
  const RockRegion m = psi_matrix();
  const DiffusionMaxCache cache(m, plot_fluid);
  const double ut = 0.5;
  double max_ppu_ends = 0.0, max_ihu = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double sl = static_cast<double>(k) / 400;
    const double sr = 1.0 - sl;
    max_ihu = std::max(
        max_ihu,
        std::abs(ihu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, cache, sl, sr).fw));
    if (sl < 0.05 || sl > 0.95) {
      max_ppu_ends = std::max(
          max_ppu_ends,
          std::abs(ppu_fractional_flux(ut, 1.0, 0.0, m, plot_fluid, sl, sr).fw));
    }
  }
  CHECK(max_ihu <= cache.global_max() + ut + 1e-9);
  CHECK(max_ppu_ends > 5.0 * max_ihu);
}
