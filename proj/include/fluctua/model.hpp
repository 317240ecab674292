#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fluctua/error.hpp"
#include "fluctua/quadrature.hpp"
#include "fluctua/specfun.hpp"

namespace fluctua {

/// Physical parameter set of one system. Lengths share the unit of xi0,
/// temperatures are in K, energies in the unit of a0*T.
struct ModelParams {
  double a0 = 1.0;     // slope of a(T) = a0 (T - Tc)
  double Tc = 1.0;     // mean-field critical temperature
  double b = 1.0;      // quartic coefficient b(Tc)
  double u0 = 1.0;     // sextic coefficient
  double xi0 = 1.0;    // coherence length
  double d = 3.0;      // space dimensionality, (0, 4] (larger only with finite x_c)
  double L = infinity; // linear sample size
  double x_c = 1.0;    // dimensionless UV cutoff xi |q|
  double kB = 1.0;

  /// V = L^d, infinite for an unbounded sample.
  double volume() const { return std::isinf(L) ? infinity : std::pow(L, d); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) {
        std::ostringstream msg;
        msg << name << " must be positive, got " << v;
        fail(ErrorKind::validation, msg.str());
      }
    };
    positive(a0, "a0");
    positive(Tc, "Tc");
    positive(xi0, "xi0");
    positive(d, "d");
    positive(L, "L");
    positive(x_c, "x_c");
    positive(kB, "kB");
    if (!(u0 >= 0.0)) fail(ErrorKind::validation, "u0 must be non-negative");
    if (!std::isfinite(b)) fail(ErrorKind::validation, "b must be finite");
    if (!std::isfinite(d) || !std::isfinite(a0) || !std::isfinite(Tc))
      fail(ErrorKind::validation, "a0, Tc and d must be finite");
  }
};

/// Natural units by default; every constant is overridable.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = 1.0;
  double mu0 = 1.0;

  void validate() const {
    if (!(hbar > 0.0 && mass > 0.0 && charge > 0.0 && mu0 > 0.0))
      fail(ErrorKind::validation, "physical constants must be positive");
  }
};

/// Solved fluctuation corrections at one temperature.
struct FluctuationState {
  double T = 0.0;
  double omega = 0.0;      // anharmonic correction Omega_d(T)
  double theta = 0.0;      // harmonic correction Theta_d(T)
  double domega_dT = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct CriticalPoint {
  double T_star = 0.0;
  double omega_c = 0.0;
  double ginzburg_width = 0.0;
  double eq30_residual = 0.0;
};

/// a(T) = a0 (T - Tc).
inline double bare_quadratic(const ModelParams& p, double T) {
  if (!(T >= 0.0)) fail(ErrorKind::domain, "temperature must be non-negative");
  return p.a0 * (T - p.Tc);
}

inline double reduced_temperature(const ModelParams& p, double T) {
  return (T - p.Tc) / p.Tc;
}

/// eps + Omega/(a0 Tc): the base of every fractional power in the theory.
inline double fluctuation_base(const ModelParams& p, double T, double omega) {
  return reduced_temperature(p, T) + omega / (p.a0 * p.Tc);
}

enum class DimensionIntegral {
  I2,  // int x^(d-1) / (1+x^2)^2
  I1,  // int x^(d-1) / (1+x^2)
  I3,  // int x^(d+1) / (1+x^2)^3
};

inline const char* to_string(DimensionIntegral k) {
  switch (k) {
    case DimensionIntegral::I2: return "I2";
    case DimensionIntegral::I1: return "I1";
    case DimensionIntegral::I3: return "I3";
  }
  return "?";
}

/// Dimension-dependent radial integral over (0, x_c). An infinite x_c is only
/// accepted where the integral converges (I2, I3: d < 4; I1: d < 2).
inline double dimension_integral(DimensionIntegral kind, double d, double x_c) {
  if (!(d > 0.0)) fail(ErrorKind::domain, "dimension_integral requires d > 0");
  if (!(x_c > 0.0)) fail(ErrorKind::domain, "dimension_integral requires x_c > 0");
  const double limit = kind == DimensionIntegral::I1 ? 2.0 : 4.0;
  if (std::isinf(x_c) && !(d < limit)) {
    std::ostringstream msg;
    msg << to_string(kind) << " diverges at large x for d = " << d
        << " (needs d < " << limit << "); supply a finite cutoff x_c";
    fail(ErrorKind::divergence, msg.str());
  }
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-13;
  spec.max_subdivisions = 4000;
  spec.upper_limit = x_c;
  auto integrand = [=](double x) -> double {
    if (x == 0.0) return 0.0;
    const double s = 1.0 + x * x;
    switch (kind) {
      case DimensionIntegral::I2: return std::pow(x, d - 1.0) / (s * s);
      case DimensionIntegral::I1: return std::pow(x, d - 1.0) / s;
      case DimensionIntegral::I3: return std::pow(x, d + 1.0) / (s * s * s);
    }
    return 0.0;
  };
  return integrate(integrand, spec).value;
}

namespace detail {

// 2^(d-1) pi^(d/2) Gamma(d/2), the common angular denominator.
inline double angular_denominator(double d) {
  return std::pow(2.0, d - 1.0) * std::pow(std::numbers::pi, 0.5 * d) *
         gamma_fn(0.5 * d);
}

}  // namespace detail

/// K_d, the amplitude of the anharmonic correction Omega_d.
inline double coefficient_K(const ModelParams& p) {
  const double integral = dimension_integral(DimensionIntegral::I2, p.d, p.x_c);
  return 45.0 * p.u0 * p.kB * p.kB * std::pow(p.xi0, -p.d) /
         (detail::angular_denominator(p.d) * p.a0 * p.a0) * integral;
}

/// Calligraphic K_d, the amplitude of the harmonic correction Theta_d.
/// Needs a finite x_c for d >= 2.
inline double coefficient_Kcal(const ModelParams& p) {
  const double integral = dimension_integral(DimensionIntegral::I1, p.d, p.x_c);
  return 15.0 * p.u0 * p.kB * std::pow(p.xi0, -p.d) /
         (detail::angular_denominator(p.d) * p.a0) * integral;
}

/// kappa_d, the heat-capacity amplitude; extensive, so L must be finite.
inline double coefficient_kappa(const ModelParams& p) {
  if (std::isinf(p.L))
    fail(ErrorKind::divergence, "heat capacity amplitude is extensive; L must be finite");
  const double integral = dimension_integral(DimensionIntegral::I2, p.d, p.x_c);
  return p.kB * p.volume() * std::pow(p.xi0, -p.d) /
         (detail::angular_denominator(p.d) * p.a0 * p.a0) * integral;
}

/// Gaussian free energy
///   F0 = -(kB T L^d / 2(2pi)^d) int_{|q|<x_c/xi0} ln[pi kB T / (a(T) + omega + q^2)] d^dq
/// with d^dq = (2 pi^(d/2)/Gamma(d/2)) q^(d-1) dq.
inline double gaussian_free_energy(const ModelParams& p, double T, double omega) {
  if (!(T > 0.0)) fail(ErrorKind::domain, "gaussian_free_energy requires T > 0");
  if (std::isinf(p.x_c))
    fail(ErrorKind::divergence, "gaussian_free_energy needs a finite cutoff x_c");
  if (std::isinf(p.L))
    fail(ErrorKind::divergence, "gaussian_free_energy is extensive; L must be finite");
  const double mass = p.a0 * (T - p.Tc) + omega;
  if (!(mass > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive Gaussian mode weight a(T)+omega = " << mass << " at T = " << T;
    fail(ErrorKind::domain, msg.str());
  }
  const double d = p.d;
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / gamma_fn(0.5 * d);
  const double thermal = std::numbers::pi * p.kB * T;
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 4000;
  spec.upper_limit = p.x_c / p.xi0;
  auto integrand = [=](double q) {
    if (q == 0.0) return 0.0;
    return std::pow(q, d - 1.0) * std::log(thermal / (mass + q * q));
  };
  const double integral = sphere * integrate(integrand, spec).value;
  return -p.kB * T * p.volume() / (2.0 * std::pow(2.0 * std::numbers::pi, d)) * integral;
}

/// Leading singular part of the Gaussian heat capacity,
///   C0 = kappa_d (T/Tc)^2 (a0 + dOmega/dT)^2 (eps + Omega/(a0 Tc))^(d/2 - 2).
inline double heat_capacity_gaussian(const ModelParams& p, double T,
                                     const FluctuationState& fluct) {
  const double base = fluctuation_base(p, T, fluct.omega);
  if (!(base > 0.0)) {
    std::ostringstream msg;
    msg << "heat_capacity_gaussian: eps + Omega/(a0 Tc) = " << base
        << " is not positive at T = " << T;
    fail(ErrorKind::domain, msg.str());
  }
  const double ratio = T / p.Tc;
  const double slope = p.a0 + fluct.domega_dT;
  return coefficient_kappa(p) * ratio * ratio * slope * slope *
         std::pow(base, 0.5 * p.d - 2.0);
}

/// Ferromagnet convention b(Tc) = kB Tc^3 / (12 T^2) at T = Tc.
inline double quartic_from_ferromagnet_convention(double kB, double Tc) {
  return kB * Tc / 12.0;
}

/// Superconductor convention a0^2 / b(Tc) = 8 pi^2 nu / (7 zeta(3)).
inline double quartic_from_bcs_ratio(double a0, double nu) {
  constexpr double zeta3 = 1.2020569031595942854;
  return a0 * a0 * 7.0 * zeta3 / (8.0 * std::numbers::pi * std::numbers::pi * nu);
}

}  // namespace fluctua
