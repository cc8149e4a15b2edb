#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace fracsim {

enum class RegionId { matrix, fracture };

/// Power-law relative permeability kr(S) = S^exponent of a phase's own
/// saturation, with kr(0) = 0 and kr(1) = 1.
struct RelPermCurve {
  int exponent = 2;

  // Returns (kr, dkr/dS). S must lie in [0,1].
  [[nodiscard]] std::pair<double, double> eval(double S) const;
};

/// Bounded matrix capillary pressure: the mixed-wet power-law curve in the
/// interior, replaced by quadratic patches near the endpoints so that
/// Pc(0) = pc_max and Pc(1) = pc_min with the composite curve C^2 at the
/// switch saturations. Construct via fit_pc_bounds().
struct MatrixCapillaryCurve {
  double entry_pressure = 0.0;
  double theta = 4.0;
  double pc_max = 0.0;
  double pc_min = 0.0;
  // left patch  a*S^2 + b*S + pc_max          on [0, s_minus]
  // right patch c*(1-S)^2 + d*(1-S) + pc_min  on [s_plus, 1]
  double a = 0.0, b = 0.0, s_minus = 0.0;
  double c = 0.0, d = 0.0, s_plus = 1.0;

  [[nodiscard]] double pc(double S) const;
  [[nodiscard]] double dpc(double S) const;
  [[nodiscard]] double d2pc(double S) const;
};

/// Linear fracture capillary pressure Pc(S) = p_max * (1 - S).
struct FractureCapillaryCurve {
  double p_max = 0.0;

  [[nodiscard]] double pc(double S) const { return p_max * (1.0 - S); }
  [[nodiscard]] double dpc(double /*S*/) const { return -p_max; }
  [[nodiscard]] double d2pc(double /*S*/) const { return 0.0; }
};

/// Value-type wrapper over the two capillary models.
class CapillaryCurve {
 public:
  CapillaryCurve() = default;
  explicit CapillaryCurve(MatrixCapillaryCurve m) : impl_(m) {}
  explicit CapillaryCurve(FractureCapillaryCurve f) : impl_(f) {}

  [[nodiscard]] double pc(double S) const;
  [[nodiscard]] double dpc(double S) const;
  [[nodiscard]] double d2pc(double S) const;
  [[nodiscard]] double min() const;  // Pc(1)
  [[nodiscard]] double max() const;  // Pc(0)

  /// Unique S with Pc(S) = target (curves are strictly decreasing).
  /// Throws std::range_error if the target is outside [min(), max()].
  [[nodiscard]] double inverse(double target) const;

  [[nodiscard]] bool is_matrix() const {
    return std::holds_alternative<MatrixCapillaryCurve>(impl_);
  }
  [[nodiscard]] const MatrixCapillaryCurve& matrix() const {
    return std::get<MatrixCapillaryCurve>(impl_);
  }
  [[nodiscard]] const FractureCapillaryCurve& fracture() const {
    return std::get<FractureCapillaryCurve>(impl_);
  }

 private:
  std::variant<MatrixCapillaryCurve, FractureCapillaryCurve> impl_;
};

/// Solves the C^2 matching systems for the endpoint patches of the bounded
/// matrix curve. Requires pc_min < 0 < pc_max, pe > 0, theta > 1.
/// Throws std::invalid_argument if no switch saturation exists in (0, 1/2)
/// (bounds too loose for the curve).
MatrixCapillaryCurve fit_pc_bounds(double entry_pressure, double theta,
                                   double pc_max, double pc_min);

struct Fluid {
  double mu_w = 0.0;   // Pa.s
  double mu_n = 0.0;   // Pa.s
  double rho_w = 0.0;  // kg/m^3
  double rho_n = 0.0;  // kg/m^3
};

/// Saturation functions, porosity and permeability of one rock region.
struct RockRegion {
  RegionId id = RegionId::matrix;
  RelPermCurve krw;  // of S_w
  RelPermCurve krn;  // of S_n = 1 - S_w
  CapillaryCurve pc;
  double porosity = 0.0;
  double permeability = 0.0;  // m^2
};

struct Mobility {
  double lam = 0.0;   // kr/mu
  double dlam = 0.0;  // d(lam)/dS_w
};

Mobility wetting_mobility(const RockRegion& r, const Fluid& f, double Sw);
Mobility nonwetting_mobility(const RockRegion& r, const Fluid& f, double Sw);

/// Capillary diffusion coefficient D(S) = -(lam_w lam_n / lam_T) dPc/dS,
/// nonnegative and zero exactly at both saturation endpoints.
/// Returns (D, dD/dS).
std::pair<double, double> capillary_diffusion(const RockRegion& r,
                                              const Fluid& f, double S);

/// Extended capillary pressure of `region` against `other`:
/// min(Pc_max(other), max(Pc(region)(S), Pc_min(other))).
double extended_pc(const RockRegion& region, double S,
                   const RockRegion& other);

/// Per-region cache of the interior critical points of D, so interval
/// maxima cost O(#critical points) per call. Immutable after construction.
class DiffusionMaxCache {
 public:
  DiffusionMaxCache() = default;
  DiffusionMaxCache(const RockRegion& region, const Fluid& fluid,
                    int scan_points = 10000);

  [[nodiscard]] double global_max() const { return global_max_; }

  struct IntervalMax {
    double value = 0.0;
    double d_lo = 0.0;  // d(max)/d(s_lo), one-sided at branch crossovers
    double d_hi = 0.0;  // d(max)/d(s_hi)
  };
  /// Max of D over [s_lo, s_hi], 0 <= s_lo <= s_hi <= 1. If the max is at
  /// an interior critical point both derivatives vanish; if at an endpoint
  /// the derivative w.r.t. that endpoint is D' there.
  [[nodiscard]] IntervalMax max_on(double s_lo, double s_hi) const;

  [[nodiscard]] const std::vector<double>& critical_saturations() const {
    return crit_s_;
  }

 private:
  RockRegion region_;
  Fluid fluid_;
  std::vector<double> crit_s_;  // interior local maxima of D, sorted
  std::vector<double> crit_d_;
  double global_max_ = 0.0;
};

}  // namespace fracsim
