#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

#include "fluctua/error.hpp"
#include "fluctua/format.hpp"
#include "fluctua/model.hpp"
#include "fluctua/selfconsist.hpp"

namespace fluctua {

// ---------------------------------------------------------------------------
// Renormalized Weiss magnetism

struct MagnetParams {
  double curie_constant = 1.0;
  double weiss_coefficient = 1.0;
  ModelParams base;
};

/// nu_d = Omega_dc / (a0 Tc); T*_c = (1 - nu_d) Tc.
inline double nu_d(const CriticalPoint& cp, const ModelParams& p) {
  return ginzburg_width(cp, p);
}

/// Internal field H*_m = N_W (1 - nu_d) M. The total field is H0 + H*_m.
inline double weiss_field(const MagnetParams& mp, const CriticalPoint& cp,
                          double magnetization) {
  return mp.weiss_coefficient * (1.0 - nu_d(cp, mp.base)) * magnetization;
}

/// Curie-Weiss law about the renormalized critical point, gamma = 1.
inline double magnetic_susceptibility(const MagnetParams& mp, const CriticalPoint& cp,
                                      double T) {
  if (!(mp.curie_constant > 0.0))
    fail(ErrorKind::validation, "Curie constant must be positive");
  const double gap = std::abs(T - cp.T_star);
  if (gap == 0.0) fail(ErrorKind::divergence, "magnetic susceptibility diverges at T*_c");
  return mp.curie_constant / gap;
}

// ---------------------------------------------------------------------------
// Ferroelectric films

struct FilmParams {
  double l0 = 10.0;  // reduced thickness
  ModelParams base;
};

/// Tc(L) = Tc - pi^2 / (a0 L^2); negative for thin enough samples.
inline double film_tc_bare(const ModelParams& base, double L) {
  if (!(L > 0.0)) fail(ErrorKind::domain, "film thickness must be positive");
  return base.Tc - std::numbers::pi * std::numbers::pi / (base.a0 * L * L);
}

struct FilmTransition {
  double temperature = 0.0;
  /// False when the film stays disordered down to T = 0 (temperature < 0).
  bool has_transition = true;
};

/// T*_c(l0) = Tc (1 - Omega_dc/(a0 Tc)) (1 - (pi/l0)^2).
inline FilmTransition film_tc_renormalized(const FilmParams& fp, const CriticalPoint& cp) {
  if (!(fp.l0 > 0.0)) fail(ErrorKind::domain, "l0 must be positive");
  const double ratio = std::numbers::pi / fp.l0;
  const double t = fp.base.Tc * (1.0 - cp.omega_c / (fp.base.a0 * fp.base.Tc)) *
                   (1.0 - ratio * ratio);
  return {t, t >= 0.0};
}

// ---------------------------------------------------------------------------
// Superconductors

struct Bulk3D {};
struct Film {
  double thickness = 1.0;  // L
};
struct Wire {
  double thickness = 1.0;  // ell
  double width = 1.0;      // varrho
};
using Geometry = std::variant<Bulk3D, Film, Wire>;

struct SuperconductorParams {
  PhysicalConstants constants;
  Geometry geometry = Bulk3D{};
  ModelParams base;

  void validate() const {
    constants.validate();
    base.validate();
    if (const auto* f = std::get_if<Film>(&geometry); f && !(f->thickness > 0.0))
      fail(ErrorKind::validation, "film thickness must be positive");
    if (const auto* w = std::get_if<Wire>(&geometry);
        w && !(w->thickness > 0.0 && w->width > 0.0))
      fail(ErrorKind::validation, "wire thickness and width must be positive");
  }
};

struct GLLengths {
  double lambda_star = 0.0;
  double xi_glw_star = 0.0;
  double kappa_star = 0.0;         // lambda*/xi*
  double kappa_closed_form = 0.0;  // sqrt(m^2 b* / (mu0 hbar^2 e^2))
};

/// Penetration depth, coherence length and their ratio with a* = a0 (T - T*_c)
/// and b* = b + Theta.
inline GLLengths gl_lengths(const SuperconductorParams& sp, double T,
                            const FluctuationState& fluct, const CriticalPoint& cp) {
  const auto& c = sp.constants;
  const double a_star = sp.base.a0 * (T - cp.T_star);
  const double b_star = sp.base.b + fluct.theta;
  if (a_star == 0.0) fail(ErrorKind::divergence, "GL lengths diverge at T*_c");
  if (!(b_star > 0.0)) fail(ErrorKind::stability, "b* must be positive");
  const double e2 = c.charge * c.charge;
  GLLengths out;
  out.lambda_star = std::sqrt(c.mass * b_star / (2.0 * c.mu0 * e2 * std::abs(a_star)));
  out.xi_glw_star = c.hbar / std::sqrt(2.0 * c.mass * std::abs(a_star));
  out.kappa_star = out.lambda_star / out.xi_glw_star;
  out.kappa_closed_form =
      std::sqrt(c.mass * c.mass * b_star / (c.mu0 * c.hbar * c.hbar * e2));
  return out;
}

/// Bare GL parameter kappa = sqrt(m^2 b / (mu0 hbar^2 e^2)).
inline double gl_parameter(const SuperconductorParams& sp) {
  const auto& c = sp.constants;
  return std::sqrt(c.mass * c.mass * sp.base.b /
                   (c.mu0 * c.hbar * c.hbar * c.charge * c.charge));
}

/// Rate constant Upsilon = 8 kB / (a0 hbar pi).
inline double relaxation_rate_constant(const SuperconductorParams& sp) {
  return 8.0 * sp.base.kB / (sp.base.a0 * sp.constants.hbar * std::numbers::pi);
}

/// tau_q = 2m / (Upsilon hbar^2 (q^2 + xi*^-2)).
inline double relaxation_time(const SuperconductorParams& sp, double q, double xi_glw_star) {
  if (!(xi_glw_star > 0.0)) fail(ErrorKind::domain, "xi* must be positive");
  if (!(q >= 0.0)) fail(ErrorKind::domain, "q must be non-negative");
  const double hbar = sp.constants.hbar;
  return 2.0 * sp.constants.mass /
         (relaxation_rate_constant(sp) * hbar * hbar *
          (q * q + 1.0 / (xi_glw_star * xi_glw_star)));
}

/// aleph_d = 2^(1-d) pi^(1-d/2) / (d Gamma(d/2)) * int x^(d+1)/(1+x^2)^3.
inline double aleph(double d, double x_c = infinity) {
  const double integral = dimension_integral(DimensionIntegral::I3, d, x_c);
  return std::pow(2.0, 1.0 - d) * std::pow(std::numbers::pi, 1.0 - 0.5 * d) /
         (d * gamma_fn(0.5 * d)) * integral;
}

/// Zero-temperature GLW coherence length hbar / sqrt(2 m a0 Tc).
inline double xi_glw_zero(const SuperconductorParams& sp) {
  return sp.constants.hbar / std::sqrt(2.0 * sp.constants.mass * sp.base.a0 * sp.base.Tc);
}

namespace detail {

inline int geometry_dimension(const Geometry& g) {
  if (std::holds_alternative<Bulk3D>(g)) return 3;
  if (std::holds_alternative<Film>(g)) return 2;
  return 1;
}

inline double geometry_divisor(const Geometry& g) {
  if (const auto* f = std::get_if<Film>(&g)) return f->thickness;
  if (const auto* w = std::get_if<Wire>(&g)) return w->thickness * w->width;
  return 1.0;
}

inline double paraconductivity_base(const SuperconductorParams& sp, double T,
                                    const FluctuationState& fluct, const CriticalPoint& cp) {
  if (!(T > cp.T_star)) {
    std::ostringstream msg;
    msg << "paraconductivity is defined above T*_c = " << format_number(cp.T_star)
        << " only, got T = " << format_number(T);
    fail(ErrorKind::domain, msg.str());
  }
  const int dim = geometry_dimension(sp.geometry);
  if (sp.base.d != static_cast<double>(dim)) {
    std::ostringstream msg;
    msg << "geometry implies d = " << dim << " but parameters have d = " << sp.base.d;
    fail(ErrorKind::unsupported, msg.str());
  }
  const double base = fluctuation_base(sp.base, T, fluct.omega);
  if (!(base > 0.0)) fail(ErrorKind::domain, "paraconductivity: non-positive base");
  return base;
}

}  // namespace detail

/// General d-dimensional paraconductivity with an explicit aleph_d value,
/// divided by the film thickness (d = 2) or wire cross-section (d = 1).
inline double paraconductivity_with_aleph(const SuperconductorParams& sp, double T,
                                          const FluctuationState& fluct,
                                          const CriticalPoint& cp, double aleph_value) {
  const double base = detail::paraconductivity_base(sp, T, fluct, cp);
  const double d = sp.base.d;
  const auto& c = sp.constants;
  return aleph_value * c.charge * c.charge * std::pow(xi_glw_zero(sp), 2.0 - d) / c.hbar *
         (1.0 - cp.omega_c / (sp.base.a0 * sp.base.Tc)) * std::pow(base, 0.5 * d - 2.0) /
         detail::geometry_divisor(sp.geometry);
}

/// sigma*_d(T) with aleph_d from quadrature.
inline double paraconductivity(const SuperconductorParams& sp, double T,
                               const FluctuationState& fluct, const CriticalPoint& cp) {
  return paraconductivity_with_aleph(sp, T, fluct, cp, aleph(sp.base.d));
}

/// The specialized 3D / film / wire expressions with their literal coefficients
/// e^2/(32 hbar xi0), e^2/(16 L hbar) and pi e^2 xi0/(16 ell varrho hbar).
inline double paraconductivity_closed_form(const SuperconductorParams& sp, double T,
                                           const FluctuationState& fluct,
                                           const CriticalPoint& cp) {
  const double base = detail::paraconductivity_base(sp, T, fluct, cp);
  const auto& c = sp.constants;
  const double e2 = c.charge * c.charge;
  const double xi0 = xi_glw_zero(sp);
  const double suppression = 1.0 - cp.omega_c / (sp.base.a0 * sp.base.Tc);
  if (std::holds_alternative<Bulk3D>(sp.geometry))
    return e2 / (32.0 * c.hbar * xi0) * suppression / std::sqrt(base);
  if (const auto* f = std::get_if<Film>(&sp.geometry))
    return e2 / (16.0 * f->thickness * c.hbar) * suppression / base;
  const auto& w = std::get<Wire>(sp.geometry);
  return std::numbers::pi * e2 * xi0 / (16.0 * w.thickness * w.width * c.hbar) *
         suppression * std::pow(base, -1.5);
}

/// Coefficient 2 e^2 Omega / (m b*) of the vector potential in the fluctuation
/// supercurrent; j_s = j_GL + j_fluct.
inline double fluctuation_current_factor(const ModelParams& p, const PhysicalConstants& c,
                                         const FluctuationState& fluct) {
  const double b_star = p.b + fluct.theta;
  if (!(b_star > 0.0)) fail(ErrorKind::stability, "b* must be positive");
  return 2.0 * c.charge * c.charge * fluct.omega / (c.mass * b_star);
}

}  // namespace fluctua
