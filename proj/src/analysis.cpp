#include "fracsim/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace fracsim {

double dimensionless_time(double t_seconds, double k_matrix, double d_max,
                          double phi, double length) {
  return k_matrix * d_max * t_seconds / (phi * length * length);
}

double RecoverySeries::time_at_recovery(double pct_target) const {
  for (std::size_t k = 1; k < t_d.size(); ++k) {
    if (pct[k] >= pct_target) {
      const double w = (pct_target - pct[k - 1]) / (pct[k] - pct[k - 1]);
      return t_d[k - 1] + w * (t_d[k] - t_d[k - 1]);
    }
  }
  throw AnalysisError("recovery never reaches target percentage");
}

RecoverySeries recovery_curve(const SimulationRecord& rec, double t_char,
                              double steady_tol) {
  if (rec.time.size() < 2) throw AnalysisError("record too short for a recovery curve");
  const double v0 = rec.matrix_nonwetting.front();
  const double v_end = rec.matrix_nonwetting.back();
  const double efflux_total = v0 - v_end;
  if (efflux_total <= 0.0) throw AnalysisError("no non-wetting efflux from the matrix");

  // Steady state: matrix inventory must be flat over the last tenth.
  const double t_window = 0.9 * rec.time.back();
  double v_window = v0;
  for (std::size_t k = 0; k < rec.time.size(); ++k) {
    if (rec.time[k] >= t_window) {
      v_window = rec.matrix_nonwetting[k];
      break;
    }
  }
  if (std::abs(v_window - v_end) > steady_tol * std::max(v0, 1e-300)) {
    throw AnalysisError("run did not reach steady state; extend the end time");
  }

  RecoverySeries out;
  out.t_d.reserve(rec.time.size());
  out.pct.reserve(rec.time.size());
  for (std::size_t k = 0; k < rec.time.size(); ++k) {
    out.t_d.push_back(rec.time[k] / t_char);
    out.pct.push_back(100.0 * (v0 - rec.matrix_nonwetting[k]) / efflux_total);
  }
  return out;
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys,
              double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

}  // namespace

ErrorNorms error_norms(const RecoverySeries& series,
                       const RecoverySeries& reference,
                       const std::vector<double>& sample_t_d) {
  ErrorNorms out;
  out.t_d = sample_t_d;
  out.e1.reserve(sample_t_d.size());
  for (double t : sample_t_d) {
    const double r = interp(series.t_d, series.pct, t);
    const double rr = interp(reference.t_d, reference.pct, t);
    const double e = std::abs(r - rr);
    out.e1.push_back(e);
    out.e2 = std::max(out.e2, e);
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int k = 0; k < n; ++k) {
    out[k] = std::exp(llo + (lhi - llo) * k / (n - 1));
  }
  return out;
}

TruncationProfile truncation_terms(std::span<const double> x_centers,
                                   std::span<const double> saturation,
                                   double dx, double u_t, double permeability,
                                   const RockRegion& region,
                                   const Fluid& fluid) {
  const int n = static_cast<int>(saturation.size());
  if (n < 4) throw AnalysisError("truncation analysis needs at least 4 cells");
  bool increasing = true, decreasing = true;
  for (int k = 1; k < n; ++k) {
    const double step = saturation[k] - saturation[k - 1];
    increasing = increasing && step >= -1e-12;
    decreasing = decreasing && step <= 1e-12;
  }
  if (!increasing && !decreasing) {
    throw AnalysisError("saturation profile segment is not monotone");
  }

  auto deriv = [&](const std::vector<double>& f) {
    std::vector<double> d(n);
    d[0] = (f[1] - f[0]) / dx;
    d[n - 1] = (f[n - 1] - f[n - 2]) / dx;
    for (int k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * dx);
    return d;
  };

  std::vector<double> m_w(n), dcoef(n), pc2(n), s(n);
  for (int k = 0; k < n; ++k) {
    s[k] = saturation[k];
    const Mobility lw = wetting_mobility(region, fluid, s[k]);
    const Mobility ln = nonwetting_mobility(region, fluid, s[k]);
    m_w[k] = lw.lam / (lw.lam + ln.lam);
    dcoef[k] = capillary_diffusion(region, fluid, s[k]).first;
    pc2[k] = region.pc.d2pc(s[k]);
  }

  const std::vector<double> s_x = deriv(s);
  const std::vector<double> s_xx = deriv(s_x);
  const std::vector<double> mw_x = deriv(m_w);
  const std::vector<double> mw_xx = deriv(mw_x);

  std::vector<double> d_sx(n), d_sxx(n), ppu_extra(n);
  for (int k = 0; k < n; ++k) {
    d_sx[k] = dcoef[k] * s_x[k];
    d_sxx[k] = dcoef[k] * s_xx[k];
    const Mobility ln = nonwetting_mobility(region, fluid, s[k]);
    ppu_extra[k] = m_w[k] * (ln.lam) * pc2[k] * s_x[k] * s_x[k];
  }
  const std::vector<double> d_sx_x = deriv(d_sx);
  const std::vector<double> d_sx_xx = deriv(d_sx_x);
  const std::vector<double> d_sxx_x = deriv(d_sxx);
  const std::vector<double> ppu_extra_x = deriv(ppu_extra);

  TruncationProfile out;
  out.x.assign(x_centers.begin(), x_centers.end());
  out.e_v.resize(n);
  out.e_c_ihu.resize(n);
  out.e_c_ppu.resize(n);
  out.e_vc_ihu.resize(n);
  out.e_vc_ppu.resize(n);
  const double half_dx = 0.5 * dx;
  for (int k = 0; k < n; ++k) {
    out.e_v[k] = -half_dx * mw_xx[k] * u_t;
    out.e_c_ihu[k] = permeability * half_dx * (d_sx_xx[k] - d_sxx_x[k]);
    out.e_c_ppu[k] = -out.e_c_ihu[k] + permeability * half_dx * ppu_extra_x[k];
    out.e_vc_ihu[k] = out.e_v[k] + out.e_c_ihu[k];
    out.e_vc_ppu[k] = out.e_v[k] + out.e_c_ppu[k];
  }
  return out;
}

CsvTable flux_surface(Scheme scheme, double u_t, double trans,
                      const RockRegion& region, const Fluid& fluid,
                      const DiffusionMaxCache& cache, int n, bool parallel) {
  std::vector<double> col_sl(static_cast<std::size_t>(n) * n);
  std::vector<double> col_sr(col_sl.size()), col_fw(col_sl.size()),
      col_fn(col_sl.size()), col_cc(col_sl.size());

#pragma omp parallel for schedule(static) if (parallel)
  for (int a = 0; a < n; ++a) {
    const double s_l = n == 1 ? 0.0 : static_cast<double>(a) / (n - 1);
    for (int b = 0; b < n; ++b) {
      const double s_r = n == 1 ? 0.0 : static_cast<double>(b) / (n - 1);
      const double fw =
          scheme == Scheme::ihu_c
              ? ihu_fractional_flux(u_t, trans, 0.0, region, fluid, cache, s_l, s_r).fw
              : ppu_fractional_flux(u_t, trans, 0.0, region, fluid, s_l, s_r).fw;
      const double fn = u_t - fw;
      const std::size_t idx = static_cast<std::size_t>(a) * n + b;
      col_sl[idx] = s_l;
      col_sr[idx] = s_r;
      col_fw[idx] = fw;
      col_fn[idx] = fn;
      col_cc[idx] = fw * fn < 0.0 ? 1.0 : 0.0;
    }
  }

  CsvTable t;
  t.add_column("s_left", std::move(col_sl));
  t.add_column("s_right", std::move(col_sr));
  t.add_column("flux_w", std::move(col_fw));
  t.add_column("flux_n", std::move(col_fn));
  t.add_column("countercurrent", std::move(col_cc));
  return t;
}

}  // namespace fracsim
