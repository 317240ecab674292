#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fluctua/error.hpp"
#include "fluctua/format.hpp"
#include "fluctua/model.hpp"
#include "fluctua/specfun.hpp"

namespace fluctua {

struct CurvePoint {
  double T = 0.0;
  double value = 0.0;
};

/// Ordered (T, value) samples of one observable.
struct ObservableCurve {
  std::string name;
  std::string unit;
  std::vector<CurvePoint> points;
  std::string params_hash;

  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!std::isfinite(points[i].T) || !std::isfinite(points[i].value))
        fail(ErrorKind::validation, "curve '" + name + "' holds a non-finite sample");
      if (i > 0 && !(points[i].T > points[i - 1].T))
        fail(ErrorKind::validation, "curve '" + name + "' is not strictly increasing in T");
    }
  }

  /// CSV with header `T,<name>`.
  void write_csv(std::ostream& out) const {
    write_csv_header(out, {"T", name});
    for (const auto& pt : points) write_csv_row(out, {pt.T, pt.value});
  }
};

/// FNV-1a digest over the bit patterns of every parameter.
inline std::string params_digest(const ModelParams& p) {
  std::uint64_t h = 14695981039346656037ull;
  for (double v : {p.a0, p.Tc, p.b, p.u0, p.xi0, p.d, p.L, p.x_c, p.kB}) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

/// Samples f on the given temperatures (sorted by the caller).
inline ObservableCurve make_curve(std::string name, std::string unit,
                                  const std::vector<double>& temperatures,
                                  const std::function<double(double)>& f,
                                  const ModelParams& p) {
  ObservableCurve curve{std::move(name), std::move(unit), {}, params_digest(p)};
  curve.points.reserve(temperatures.size());
  for (double T : temperatures) curve.points.push_back({T, f(T)});
  curve.validate();
  return curve;
}

enum class Side { above, below };

/// `count` temperatures with |T - T*|/Tc log-spaced over [lo, hi], increasing in T.
inline std::vector<double> critical_window_grid(double T_star, double Tc, Side side,
                                                std::pair<double, double> window,
                                                int count) {
  if (count < 2) fail(ErrorKind::validation, "critical_window_grid needs count >= 2");
  const auto [lo, hi] = window;
  if (!(lo > 0.0 && hi > lo)) fail(ErrorKind::validation, "invalid |eps*| window");
  std::vector<double> temps(count);
  for (int i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / (count - 1);
    const double e = std::exp(std::log(lo) + frac * (std::log(hi) - std::log(lo)));
    temps[i] = side == Side::above ? T_star + e * Tc : T_star - e * Tc;
  }
  if (side == Side::below) std::reverse(temps.begin(), temps.end());
  return temps;
}

struct ExponentSet {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double nu = 0.0;
  double eta = 0.0;
  std::array<double, 4> relation_residuals{};
};

/// |alpha - (2 - d nu)|, |alpha + beta(1 + delta) - 2|, |alpha + 2 beta + gamma - 2|,
/// |gamma - beta(delta - 1)|.
inline std::array<double, 4> check_scaling_relations(const ExponentSet& e, double d) {
  return {std::abs(e.alpha - (2.0 - d * e.nu)),
          std::abs(e.alpha + e.beta * (1.0 + e.delta) - 2.0),
          std::abs(e.alpha + 2.0 * e.beta + e.gamma - 2.0),
          std::abs(e.gamma - e.beta * (e.delta - 1.0))};
}

/// chi* = 1 / (a0 (T - Tc) + Omega).
inline double susceptibility(const ModelParams& p, double T, const FluctuationState& fluct) {
  const double inverse = p.a0 * (T - p.Tc) + fluct.omega;
  if (inverse == 0.0) fail(ErrorKind::divergence, "susceptibility diverges at T*_c");
  return 1.0 / inverse;
}

/// G*(q) = [2 beta (a(T) + Omega + q^2)]^-1.
inline double q_mode_correlator(const ModelParams& p, double T,
                                const FluctuationState& fluct, double q) {
  if (!(q >= 0.0)) fail(ErrorKind::domain, "q must be non-negative");
  if (!(T > 0.0)) fail(ErrorKind::domain, "q_mode_correlator requires T > 0");
  const double beta = 1.0 / (p.kB * T);
  const double weight = p.a0 * (T - p.Tc) + fluct.omega + q * q;
  if (!(weight > 0.0)) fail(ErrorKind::domain, "non-positive q-mode weight");
  return 1.0 / (2.0 * beta * weight);
}

/// Renormalized correlation length; the branch below T*_c carries half the amplitude.
inline double correlation_length(const ModelParams& p, double T, const CriticalPoint& cp,
                                 const FluctuationState& fluct, double xi0_plus,
                                 double xi0_minus) {
  if (T == cp.T_star) fail(ErrorKind::divergence, "correlation length diverges at T*_c");
  const double root_tc = std::sqrt(p.Tc);
  if (T > cp.T_star) {
    const double bracket = T - cp.T_star + (fluct.omega - cp.omega_c) / p.a0;
    if (!(bracket > 0.0)) fail(ErrorKind::domain, "correlation_length: bracket not positive");
    return xi0_plus * root_tc / std::sqrt(bracket);
  }
  // Sign of (Omega_dc - Omega) mirrors the upper branch, as written in the source formula.
  const double bracket = cp.T_star - T + (cp.omega_c - fluct.omega) / p.a0;
  if (!(bracket > 0.0)) fail(ErrorKind::domain, "correlation_length: bracket not positive");
  return 0.5 * xi0_minus * root_tc / std::sqrt(bracket);
}

inline double correlation_length(const ModelParams& p, double T, const CriticalPoint& cp,
                                 const FluctuationState& fluct) {
  return correlation_length(p, T, cp, fluct, p.xi0, p.xi0);
}

/// l* = l0 Tc^(-1/2) [T*_c - T + (Omega_dc - Omega)/a0]^(1/2), below T*_c only.
/// l* >> 1: negligible finite-size effects; l* <= 1: strong rounding.
inline double reduced_length(const ModelParams& p, double T, const CriticalPoint& cp,
                             const FluctuationState& fluct, double l0) {
  if (!(l0 > 0.0)) fail(ErrorKind::domain, "reduced_length requires l0 > 0");
  if (!(T < cp.T_star)) fail(ErrorKind::domain, "reduced_length requires T < T*_c");
  const double bracket = cp.T_star - T + (cp.omega_c - fluct.omega) / p.a0;
  if (!(bracket > 0.0)) fail(ErrorKind::domain, "reduced_length: bracket not positive");
  return l0 * std::sqrt(bracket / p.Tc);
}

/// Real-space correlator in d = 1, 2, 3. The d = 1 row is (x/xi) e^(-x/xi),
/// which vanishes at contact (unlike the Ornstein-Zernike (xi/2) e^(-x/xi)).
inline double correlation_function(int d, double distance, double xi_star) {
  if (!(distance > 0.0) || !(xi_star > 0.0))
    fail(ErrorKind::domain, "correlation_function needs positive distance and xi*");
  const double s = distance / xi_star;
  switch (d) {
    case 1: return s * std::exp(-s);
    case 2: return bessel_k0(s) / (2.0 * std::numbers::pi);
    case 3: return std::exp(-s) / (4.0 * std::numbers::pi * distance);
    default: break;
  }
  fail(ErrorKind::unsupported, "correlation_function is tabulated for d = 1, 2, 3 only");
}

struct OrderParameterPoint {
  double T = 0.0;
  double psi0 = 0.0;
  double f_T = 0.0;
  double a_star = 0.0;
  double b_star = 0.0;
};

/// Spontaneous order parameter with a* = a(T) + Omega and b* = b + Theta.
/// For the critical state (Omega = Omega_dc) a* = a0 (T - T*_c).
inline OrderParameterPoint order_parameter(const ModelParams& p, double T,
                                           const FluctuationState& fluct) {
  OrderParameterPoint op;
  op.T = T;
  const double a = p.a0 * (T - p.Tc);
  op.a_star = a + fluct.omega;
  op.b_star = p.b + fluct.theta;
  if (!(op.b_star > 0.0)) {
    std::ostringstream msg;
    msg << "renormalized quartic coefficient b* = " << op.b_star
        << " is not positive (first-order regime)";
    fail(ErrorKind::stability, msg.str());
  }
  if (a == 0.0) fail(ErrorKind::domain, "amplitude prefactor undefined at T = Tc");
  op.f_T = std::sqrt(std::abs(1.0 + fluct.omega / a) / (1.0 + fluct.theta / p.b));
  op.psi0 = op.a_star < 0.0 ? std::sqrt(-op.a_star / (2.0 * op.b_star)) : 0.0;
  return op;
}

/// h = 2 a* psi + 4 b* psi^3.
inline double equation_of_state(const OrderParameterPoint& op, double psi) {
  return 2.0 * op.a_star * psi + 4.0 * op.b_star * psi * psi * psi;
}

/// Delta C* = L^d Tc (a0^2 / 2 b(Tc)) (1 - Omega_dc/(a0 Tc)).
inline double specific_heat_jump(const ModelParams& p, const CriticalPoint& cp) {
  if (std::isinf(p.L)) fail(ErrorKind::divergence, "specific heat jump needs finite L");
  if (!(p.b > 0.0)) fail(ErrorKind::stability, "specific heat jump needs b(Tc) > 0");
  return p.volume() * p.Tc * p.a0 * p.a0 / (2.0 * p.b) *
         (1.0 - cp.omega_c / (p.a0 * p.Tc));
}

enum class PowerLaw {
  diverging,  // value ~ |eps*|^(-exponent)
  vanishing,  // value ~ |eps*|^(+exponent)
};

struct ExponentFit {
  double exponent = 0.0;
  double std_error = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares slope of ln(value) against ln|eps*|, eps* = (T - T*)/Tc, over the
/// points on `side` with |eps*| inside `window`.
inline ExponentFit fit_exponent(const ObservableCurve& curve, double T_star, double Tc,
                                Side side, std::pair<double, double> window,
                                PowerLaw law = PowerLaw::diverging) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& pt : curve.points) {
    const double e = (pt.T - T_star) / Tc;
    if (side == Side::above ? !(e > 0.0) : !(e < 0.0)) continue;
    const double ae = std::abs(e);
    if (ae < window.first * (1 - 1e-12) || ae > window.second * (1 + 1e-12)) continue;
    if (!(pt.value > 0.0))
      fail(ErrorKind::fit, "fit_exponent: non-positive value in window of '" + curve.name + "'");
    xy.emplace_back(std::log(ae), std::log(pt.value));
  }
  const int n = static_cast<int>(xy.size());
  if (n < 8) {
    std::ostringstream msg;
    msg << "fit_exponent needs at least 8 points in the window, found " << n;
    fail(ErrorKind::fit, msg.str());
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::fit, "fit_exponent: degenerate abscissae");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = y - (fit.intercept + fit.slope * x);
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / (n - 2) / sxx);
  fit.exponent = law == PowerLaw::diverging ? -fit.slope : fit.slope;
  fit.points = n;
  return fit;
}

}  // namespace fluctua
