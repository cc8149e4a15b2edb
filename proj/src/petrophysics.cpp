#include "fracsim/petrophysics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracsim {

namespace {

double checked_saturation(double S) {
  // Allow round-off excursions, reject genuinely out-of-range input.
  constexpr double slack = 1e-12;
  if (S < -slack || S > 1.0 + slack) {
    throw std::domain_error("saturation outside [0,1]");
  }
  return std::clamp(S, 0.0, 1.0);
}

}  // namespace

std::pair<double, double> RelPermCurve::eval(double S) const {
  S = checked_saturation(S);
  if (exponent < 1) throw std::invalid_argument("relperm exponent must be >= 1");
  double kr = 1.0;
  double km1 = 1.0;  // S^(exponent-1)
  for (int k = 0; k < exponent - 1; ++k) km1 *= S;
  kr = km1 * S;
  return {kr, exponent * km1};
}

double MatrixCapillaryCurve::pc(double S) const {
  S = checked_saturation(S);
  if (S <= s_minus) return (a * S + b) * S + pc_max;
  if (S >= s_plus) {
    const double u = 1.0 - S;
    return (c * u + d) * u + pc_min;
  }
  const double e = -1.0 / theta;
  return entry_pressure * (std::pow(S, e) - std::pow(1.0 - S, e));
}

double MatrixCapillaryCurve::dpc(double S) const {
  S = checked_saturation(S);
  if (S <= s_minus) return 2.0 * a * S + b;
  if (S >= s_plus) {
    const double u = 1.0 - S;
    return -(2.0 * c * u + d);
  }
  const double e = -1.0 / theta;
  return entry_pressure * e * (std::pow(S, e - 1.0) + std::pow(1.0 - S, e - 1.0));
}

double MatrixCapillaryCurve::d2pc(double S) const {
  S = checked_saturation(S);
  if (S <= s_minus) return 2.0 * a;
  if (S >= s_plus) return 2.0 * c;
  const double e = -1.0 / theta;
  return entry_pressure * e * (e - 1.0) *
         (std::pow(S, e - 2.0) - std::pow(1.0 - S, e - 2.0));
}

double CapillaryCurve::pc(double S) const {
  return std::visit([S](const auto& m) { return m.pc(S); }, impl_);
}
double CapillaryCurve::dpc(double S) const {
  return std::visit([S](const auto& m) { return m.dpc(S); }, impl_);
}
double CapillaryCurve::d2pc(double S) const {
  return std::visit([S](const auto& m) { return m.d2pc(S); }, impl_);
}
double CapillaryCurve::min() const { return pc(1.0); }
double CapillaryCurve::max() const { return pc(0.0); }

double CapillaryCurve::inverse(double target) const {
  const double lo_val = min();
  const double hi_val = max();
  if (target < lo_val || target > hi_val) {
    throw std::range_error("capillary pressure target outside curve range");
  }
  if (const auto* f = std::get_if<FractureCapillaryCurve>(&impl_)) {
    return std::clamp(1.0 - target / f->p_max, 0.0, 1.0);
  }
  // Strictly decreasing: bisect, then polish with Newton.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pc(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14) break;
  }
  double S = 0.5 * (lo + hi);
  const double tol = 1e-12 * std::max(1.0, std::abs(target));
  for (int it = 0; it < 20; ++it) {
    const double r = pc(S) - target;
    if (std::abs(r) <= tol) break;
    const double dr = dpc(S);
    double step = -r / dr;
    double next = S + step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (pc(next) > target) {
      lo = next;
    } else {
      hi = next;
    }
    S = next;
  }
  return S;
}

namespace {

struct RawCurve {
  double pe, theta;
  double pc(double S) const {
    const double e = -1.0 / theta;
    return pe * (std::pow(S, e) - std::pow(1.0 - S, e));
  }
  double dpc(double S) const {
    const double e = -1.0 / theta;
    return pe * e * (std::pow(S, e - 1.0) + std::pow(1.0 - S, e - 1.0));
  }
  double d2pc(double S) const {
    const double e = -1.0 / theta;
    return pe * e * (e - 1.0) * (std::pow(S, e - 2.0) - std::pow(1.0 - S, e - 2.0));
  }
  double d3pc(double S) const {
    const double e = -1.0 / theta;
    return pe * e * (e - 1.0) * (e - 2.0) *
           (std::pow(S, e - 3.0) + std::pow(1.0 - S, e - 3.0));
  }
};

// Root of g on (lo,hi) by bisection plus Newton polish; g must change sign.
template <class F, class DF>
double solve_switch(F g, DF dg, double lo, double hi, const char* what) {
  double glo = g(lo), ghi = g(hi);
  if (!(glo > 0.0 && ghi < 0.0) && !(glo < 0.0 && ghi > 0.0)) {
    throw std::invalid_argument(std::string("fit_pc_bounds: no switch saturation for ") + what +
                                " (bounds too loose for the curve)");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double gs = g(s);
    const double d = dg(s);
    if (d == 0.0) break;
    const double next = s - gs / d;
    if (next <= lo || next >= hi) break;
    s = next;
  }
  return s;
}

}  // namespace

MatrixCapillaryCurve fit_pc_bounds(double entry_pressure, double theta,
                                   double pc_max, double pc_min) {
  if (!(pc_min < 0.0 && 0.0 < pc_max)) {
    throw std::invalid_argument("fit_pc_bounds: requires pc_min < 0 < pc_max");
  }
  if (!(entry_pressure > 0.0) || !(theta > 1.0)) {
    throw std::invalid_argument("fit_pc_bounds: requires pe > 0 and theta > 1");
  }
  const RawCurve raw{entry_pressure, theta};
  constexpr double eps = 1e-6;

  // Value/slope/curvature matching reduces to one scalar equation per patch;
  // the quadratic coefficients follow by back-substitution.
  auto g_left = [&](double s) {
    return raw.pc(s) - s * raw.dpc(s) + 0.5 * s * s * raw.d2pc(s) - pc_max;
  };
  auto dg_left = [&](double s) { return 0.5 * s * s * raw.d3pc(s); };
  const double s_minus = solve_switch(g_left, dg_left, eps, 0.5 - eps, "s_minus");

  auto g_right = [&](double s) {
    const double u = 1.0 - s;
    return raw.pc(s) + u * raw.dpc(s) + 0.5 * u * u * raw.d2pc(s) - pc_min;
  };
  auto dg_right = [&](double s) {
    const double u = 1.0 - s;
    return 0.5 * u * u * raw.d3pc(s);
  };
  const double s_plus = solve_switch(g_right, dg_right, 0.5 + eps, 1.0 - eps, "s_plus");

  MatrixCapillaryCurve out;
  out.entry_pressure = entry_pressure;
  out.theta = theta;
  out.pc_max = pc_max;
  out.pc_min = pc_min;
  out.s_minus = s_minus;
  out.a = 0.5 * raw.d2pc(s_minus);
  out.b = raw.dpc(s_minus) - raw.d2pc(s_minus) * s_minus;
  out.s_plus = s_plus;
  out.c = 0.5 * raw.d2pc(s_plus);
  out.d = -raw.dpc(s_plus) - raw.d2pc(s_plus) * (1.0 - s_plus);
  return out;
}

Mobility wetting_mobility(const RockRegion& r, const Fluid& f, double Sw) {
  const auto [kr, dkr] = r.krw.eval(Sw);
  return {kr / f.mu_w, dkr / f.mu_w};
}

Mobility nonwetting_mobility(const RockRegion& r, const Fluid& f, double Sw) {
  const auto [kr, dkr] = r.krn.eval(1.0 - Sw);
  return {kr / f.mu_n, -dkr / f.mu_n};
}

std::pair<double, double> capillary_diffusion(const RockRegion& r,
                                              const Fluid& f, double S) {
  const Mobility w = wetting_mobility(r, f, S);
  const Mobility n = nonwetting_mobility(r, f, S);
  const double lt = w.lam + n.lam;
  if (lt <= 0.0) throw std::domain_error("total mobility vanished");
  const double q = w.lam * n.lam / lt;
  const double dq = (w.dlam * n.lam + w.lam * n.dlam) / lt -
                    q * (w.dlam + n.dlam) / lt;
  const double p1 = r.pc.dpc(S);
  const double p2 = r.pc.d2pc(S);
  return {-q * p1, -dq * p1 - q * p2};
}

double extended_pc(const RockRegion& region, double S,
                   const RockRegion& other) {
  return std::min(other.pc.max(), std::max(region.pc.pc(S), other.pc.min()));
}

DiffusionMaxCache::DiffusionMaxCache(const RockRegion& region,
                                     const Fluid& fluid, int scan_points)
    : region_(region), fluid_(fluid) {
  // Locate interior critical points of D by bracketing sign changes of D'
  // on a dense grid, then bisecting each bracket.
  const int n = std::max(scan_points, 100);
  auto dprime = [&](double s) { return capillary_diffusion(region_, fluid_, s).second; };
  double prev_s = 0.0;
  double prev_d = dprime(1e-14);
  for (int i = 1; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double ds = dprime(std::min(s, 1.0 - 1e-14));
    if (prev_d > 0.0 && ds <= 0.0) {  // local maximum in (prev_s, s)
      double lo = prev_s, hi = s;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dprime(mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double sc = 0.5 * (lo + hi);
      crit_s_.push_back(sc);
      crit_d_.push_back(capillary_diffusion(region_, fluid_, sc).first);
    }
    prev_s = s;
    prev_d = ds;
  }
  global_max_ = 0.0;  // D vanishes at both endpoints
  for (double d : crit_d_) global_max_ = std::max(global_max_, d);
}

DiffusionMaxCache::IntervalMax DiffusionMaxCache::max_on(double s_lo,
                                                         double s_hi) const {
  s_lo = checked_saturation(s_lo);
  s_hi = checked_saturation(s_hi);
  if (s_lo > s_hi) throw std::invalid_argument("max_on: s_lo > s_hi");

  const auto [d_lo_val, d_lo_der] = capillary_diffusion(region_, fluid_, s_lo);
  const auto [d_hi_val, d_hi_der] = capillary_diffusion(region_, fluid_, s_hi);

  IntervalMax best{d_lo_val, d_lo_der, 0.0};
  if (d_hi_val > best.value) best = {d_hi_val, 0.0, d_hi_der};
  for (std::size_t k = 0; k < crit_s_.size(); ++k) {
    if (crit_s_[k] > s_lo && crit_s_[k] < s_hi && crit_d_[k] > best.value) {
      best = {crit_d_[k], 0.0, 0.0};
    }
  }
  return best;
}

}  // namespace fracsim
