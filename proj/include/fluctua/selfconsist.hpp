#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "fluctua/error.hpp"
#include "fluctua/model.hpp"
#include "fluctua/roots.hpp"

namespace fluctua {

struct SolverSettings {
  double rel_tol = 1e-12;
  int max_iter = 200;
  double bracket_expansion = 2.0;

  void validate() const {
    if (!(rel_tol > 0.0)) fail(ErrorKind::validation, "solver rel_tol must be positive");
    if (max_iter < 1) fail(ErrorKind::validation, "solver max_iter must be >= 1");
    if (!(bracket_expansion > 1.0))
      fail(ErrorKind::validation, "bracket_expansion must exceed 1");
  }
};

/// Non-convergence of the fixed-point solve; carries the best state reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, FluctuationState best)
      : Error(ErrorKind::convergence, what), best_(best) {}
  const FluctuationState& best_state() const noexcept { return best_; }

 private:
  FluctuationState best_;
};

namespace detail {

inline double log_root_tolerance() { return 4.0 * std::numeric_limits<double>::epsilon(); }

// Expands [lo, hi] in a log variable until G(lo) < 0 < G(hi); G increasing.
template <class G>
void expand_log_bracket(const G& g, double& lo, double& hi, double& g_lo, double& g_hi,
                        const SolverSettings& s) {
  double step = 1.0;
  for (int i = 0; g_lo > 0.0; ++i) {
    if (i >= s.max_iter) fail(ErrorKind::no_solution, "no sign change below the root");
    hi = lo;
    g_hi = g_lo;
    lo -= step;
    step *= s.bracket_expansion;
    g_lo = g(lo);
  }
  step = 1.0;
  for (int i = 0; g_hi < 0.0; ++i) {
    if (i >= s.max_iter) fail(ErrorKind::no_solution, "no sign change above the root");
    lo = hi;
    g_lo = g_hi;
    hi += step;
    step *= s.bracket_expansion;
    g_hi = g(hi);
  }
}

}  // namespace detail

/// Amplitude K_d / V of the anharmonic fixed point; zero for an unbounded sample.
inline double omega_amplitude(const ModelParams& p) {
  if (std::isinf(p.L) || p.u0 == 0.0) return 0.0;
  return coefficient_K(p) / p.volume();
}

/// Residual Omega - (K_d/V)(T/Tc)^2 (eps + Omega/(a0 Tc))^(d/2-2) of the fixed point.
inline double omega_residual(const ModelParams& p, double T, double omega) {
  const double amplitude = omega_amplitude(p);
  if (amplitude == 0.0) return omega;
  const double ratio = T / p.Tc;
  return omega - amplitude * ratio * ratio *
                     std::pow(fluctuation_base(p, T, omega), 0.5 * p.d - 2.0);
}

/// Implicit derivative dOmega/dT at a solved fixed point.
inline double domega_dT(const ModelParams& p, const FluctuationState& state) {
  if (!state.converged) fail(ErrorKind::convergence, "domega_dT needs a converged state");
  const double k_over_v = omega_amplitude(p);
  if (k_over_v == 0.0) return 0.0;
  const double T = state.T;
  const double exponent = 0.5 * p.d - 2.0;
  const double A = k_over_v * (T / p.Tc) * (T / p.Tc);
  const double dA = 2.0 * k_over_v * T / (p.Tc * p.Tc);
  if (exponent == 0.0) return dA;
  // B = (Omega/A)^(1/p) at the fixed point; free of the cancellation in eps + Omega/(a0 Tc).
  const double B = std::pow(state.omega / A, 1.0 / exponent);
  if (!(B > 0.0) || !std::isfinite(B))
    fail(ErrorKind::domain, "domega_dT: non-positive fluctuation base");
  const double coupling = A * exponent * std::pow(B, exponent - 1.0);
  const double denominator = 1.0 - coupling / (p.a0 * p.Tc);
  if (std::abs(denominator) < 1e-14)
    fail(ErrorKind::domain, "domega_dT: singular implicit derivative");
  return (dA * std::pow(B, exponent) + coupling / p.Tc) / denominator;
}

/// Solves Omega = (K_d/V)(T/Tc)^2 (eps + Omega/(a0 Tc))^(d/2-2) for Omega(T).
/// For d < 4 the root is unique; it is bracketed in log(Omega/(a0 Tc)) above Tc
/// and in log(eps + Omega/(a0 Tc)) at or below Tc.
inline FluctuationState solve_omega(const ModelParams& p, double T,
                                    const SolverSettings& settings = {}) {
  p.validate();
  settings.validate();
  if (!(T > 0.0)) fail(ErrorKind::domain, "solve_omega requires T > 0");

  FluctuationState state;
  state.T = T;
  const double k_over_v = omega_amplitude(p);
  if (k_over_v == 0.0) return state;

  const double scale = p.a0 * p.Tc;
  const double eps = reduced_temperature(p, T);
  const double exponent = 0.5 * p.d - 2.0;
  const double c = k_over_v * (T / p.Tc) * (T / p.Tc) / scale;
  const double log_c = std::log(c);

  double w = 0.0;     // Omega / (a0 Tc)
  double base = 0.0;  // eps + w, kept from the root variable
  int iterations = 0;
  bool converged = true;
  if (exponent == 0.0) {
    w = c;
    base = eps + w;
  } else if (exponent < 0.0) {
    RootResult root;
    if (eps > 0.0) {
      // t = ln w
      auto g = [&](double t) {
        return t - log_c - exponent * std::log(eps + std::exp(t));
      };
      double lo = log_c + exponent * std::log(eps), hi = lo;
      double g_lo = g(lo), g_hi = g_lo;
      detail::expand_log_bracket(g, lo, hi, g_lo, g_hi, settings);
      root = brent_root(g, lo, hi, g_lo, g_hi, detail::log_root_tolerance(),
                        settings.max_iter);
      w = std::exp(root.x);
      base = eps + w;
    } else {
      // s = ln(eps + w); w = e^s + |eps| has no cancellation.
      auto g = [&](double s) {
        return std::log(std::exp(s) - eps) - log_c - exponent * s;
      };
      double lo = 0.0, hi = 0.0;
      double g_lo = g(lo), g_hi = g_lo;
      detail::expand_log_bracket(g, lo, hi, g_lo, g_hi, settings);
      root = brent_root(g, lo, hi, g_lo, g_hi, detail::log_root_tolerance(),
                        settings.max_iter);
      base = std::exp(root.x);
      w = base - eps;
    }
    iterations = root.iterations;
    converged = root.converged;
  } else {
    // d > 4: right side increases with Omega; take the smallest root by scanning.
    const double w_min = std::max(0.0, -eps);
    auto g = [&](double ww) { return ww - c * std::pow(eps + ww, exponent); };
    double prev = w_min;
    double g_prev = w_min > 0.0 ? g(w_min) : -c * std::pow(eps, exponent);
    bool found = g_prev == 0.0;
    if (!found) {
      for (int k = -300; k <= 300 * 4; ++k) {
        const double ww = w_min + std::pow(10.0, 0.25 * k);
        const double gw = g(ww);
        if (g_prev < 0.0 && gw >= 0.0) {
          RootResult root = brent_root(g, prev, ww, g_prev, gw, 0.0, settings.max_iter);
          w = root.x;
          base = eps + w;
          iterations = root.iterations;
          converged = root.converged;
          found = true;
          break;
        }
        prev = ww;
        g_prev = gw;
      }
    } else {
      w = w_min;
      base = eps + w;
    }
    if (!found) {
      std::ostringstream msg;
      msg << "solve_omega: no fixed point for d = " << p.d << " at T = " << T;
      fail(ErrorKind::no_solution, msg.str());
    }
  }

  state.omega = w * scale;
  state.iterations = iterations;
  // Residual of the fixed point with the base taken from the root variable.
  state.residual = exponent == 0.0
                       ? std::abs(state.omega - c * scale)
                       : std::abs(state.omega - c * scale * std::pow(base, exponent));
  state.converged = converged;
  if (!converged) {
    std::ostringstream msg;
    msg << "solve_omega did not converge in " << settings.max_iter << " iterations at T = "
        << T;
    throw ConvergenceError(msg.str(), state);
  }
  state.domega_dT = domega_dT(p, state);
  return state;
}

/// Theta_d = Kcal_d (T/Tc) (eps + Omega/(a0 Tc))^(d/2-1); at d = 2 the power drops out.
inline double solve_theta(const ModelParams& p, double T, double omega) {
  if (!(T >= 0.0)) fail(ErrorKind::domain, "solve_theta requires T >= 0");
  if (T == 0.0 || p.u0 == 0.0) return 0.0;
  const double kcal = coefficient_Kcal(p);
  const double ratio = T / p.Tc;
  if (p.d == 2.0) return kcal * ratio;
  const double base = fluctuation_base(p, T, omega);
  if (!(base > 0.0)) {
    std::ostringstream msg;
    msg << "solve_theta: eps + Omega/(a0 Tc) = " << base << " is not positive at T = " << T;
    fail(ErrorKind::domain, msg.str());
  }
  return kcal * ratio * std::pow(base, 0.5 * p.d - 1.0);
}

/// Omega(T), dOmega/dT and Theta(T) in one state.
inline FluctuationState solve_fluctuations(const ModelParams& p, double T,
                                           const SolverSettings& settings = {}) {
  FluctuationState state = solve_omega(p, T, settings);
  state.theta = solve_theta(p, T, state.omega);
  return state;
}

/// Renormalized critical point. Omega_dc solves the fixed point at T = T*_c with
/// |eps| = Omega_dc/(a0 Tc), so with nu = Omega_dc/(a0 Tc) and c = K_d/(V a0 Tc):
///   nu = c (1 - nu)^2 (2 nu)^(d/2 - 2),   T*_c = Tc - Omega_dc / a0.
inline CriticalPoint solve_critical_point(const ModelParams& p,
                                          const SolverSettings& settings = {}) {
  p.validate();
  settings.validate();
  CriticalPoint cp;
  cp.T_star = p.Tc;
  const double k_over_v = omega_amplitude(p);
  if (k_over_v == 0.0) return cp;
  if (p.d > 4.0) {
    std::ostringstream msg;
    msg << "solve_critical_point supports d <= 4, got d = " << p.d;
    fail(ErrorKind::unsupported, msg.str());
  }

  const double scale = p.a0 * p.Tc;
  const double c = k_over_v / scale;
  const double exponent = 0.5 * p.d - 2.0;
  double nu = 0.0;
  if (exponent == 0.0) {
    nu = 2.0 * c / ((2.0 * c + 1.0) + std::sqrt(4.0 * c + 1.0));
  } else {
    const double log_c = std::log(c);
    auto g = [&](double s) {
      return (1.0 - exponent) * s - log_c - 2.0 * std::log1p(-std::exp(s)) -
             exponent * std::numbers::ln2;
    };
    double hi = -1.0, lo = -1.0;
    double g_hi = g(hi), g_lo = g_hi;
    for (int i = 0; g_lo > 0.0; ++i) {
      if (i >= settings.max_iter)
        fail(ErrorKind::no_solution, "solve_critical_point: no lower bracket");
      hi = lo;
      g_hi = g_lo;
      lo = lo * settings.bracket_expansion;
      g_lo = g(lo);
    }
    if (g_hi < 0.0) {
      // Root lies in (-1, 0): approach nu = 1 geometrically.
      double gap = std::exp(-1.0);
      for (int i = 0; g_hi < 0.0; ++i) {
        gap *= 0.5;
        if (i >= 1100 || gap < 1e-300)
          fail(ErrorKind::unphysical,
               "solve_critical_point: Omega_dc reaches a0 Tc, T*_c would be <= 0");
        lo = hi;
        g_lo = g_hi;
        hi = std::log1p(-gap);
        g_hi = g(hi);
      }
    }
    RootResult root = brent_root(g, lo, hi, g_lo, g_hi, detail::log_root_tolerance(),
                                 settings.max_iter);
    if (!root.converged)
      fail(ErrorKind::convergence, "solve_critical_point: root iteration did not converge");
    nu = std::exp(root.x);
  }
  if (!(nu < 1.0))
    fail(ErrorKind::unphysical, "Omega_dc >= a0 Tc drives T*_c to zero or below");

  cp.omega_c = nu * scale;
  cp.T_star = p.Tc - cp.omega_c / p.a0;
  cp.ginzburg_width = cp.omega_c / (p.a0 * p.Tc);
  if (!(cp.T_star > 0.0))
    fail(ErrorKind::unphysical, "T*_c is not positive for these parameters");

  // (d/2 - 2) ln(|eps| + Omega_dc/(a0 Tc)) = ln(a0^2 Tc^2 Omega_dc / (K (a0 Tc - Omega_dc)^2))
  const double abs_eps = std::abs(reduced_temperature(p, cp.T_star));
  const double lhs = exponent * std::log(abs_eps + cp.omega_c / scale);
  const double gap = scale - cp.omega_c;
  const double rhs = std::log(scale * scale * cp.omega_c / (k_over_v * gap * gap));
  cp.eq30_residual = lhs - rhs;
  return cp;
}

/// Delta t_G = Omega_dc / (a0 Tc).
inline double ginzburg_width(const CriticalPoint& cp, const ModelParams& p) {
  return cp.omega_c / (p.a0 * p.Tc);
}

/// Rescales u0 so that the critical point has the requested Ginzburg width.
/// The root equation is linear in u0, so the inversion is closed-form; the
/// result is re-solved and checked to rel 1e-6.
inline ModelParams calibrate_to_width(double target_width, const ModelParams& base,
                                      const SolverSettings& settings = {}) {
  if (!(target_width > 0.0 && target_width < 1.0))
    fail(ErrorKind::calibration, "target Ginzburg width must lie in (0, 1)");
  if (std::isinf(base.L))
    fail(ErrorKind::calibration, "an unbounded sample has zero Ginzburg width");
  if (base.d > 4.0) fail(ErrorKind::calibration, "calibration supports d <= 4");
  ModelParams unit = base;
  unit.u0 = 1.0;
  const double amplitude = omega_amplitude(unit);
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    fail(ErrorKind::calibration, "K_d/V is not a positive finite number");
  const double nu = target_width;
  const double exponent = 0.5 * base.d - 2.0;
  const double c = nu / ((1.0 - nu) * (1.0 - nu) * std::pow(2.0 * nu, exponent));
  ModelParams out = base;
  out.u0 = c * base.a0 * base.Tc / amplitude;
  if (!(out.u0 > 0.0) || !std::isfinite(out.u0))
    fail(ErrorKind::calibration, "target width unreachable within the u0 range");
  const CriticalPoint cp = solve_critical_point(out, settings);
  if (std::abs(cp.ginzburg_width - target_width) > 1e-6 * target_width) {
    std::ostringstream msg;
    msg << "calibration round trip missed: got " << cp.ginzburg_width << ", wanted "
        << target_width;
    fail(ErrorKind::calibration, msg.str());
  }
  return out;
}

/// Fluctuation state of the renormalized mean-field description near T*_c:
/// Omega frozen at Omega_dc (so a* = a0 (T - T*_c)) with dOmega/dT = 0.
/// Theta_d(T) comes from the self-consistent Omega(T) when requested.
inline FluctuationState critical_state(const ModelParams& p, const CriticalPoint& cp,
                                       double T, bool with_theta = true,
                                       const SolverSettings& settings = {}) {
  FluctuationState state;
  state.T = T;
  state.omega = cp.omega_c;
  if (with_theta) state.theta = solve_fluctuations(p, T, settings).theta;
  return state;
}

}  // namespace fluctua
