#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fluctua/error.hpp"
#include "fluctua/model.hpp"
#include "fluctua/quadrature.hpp"
#include "fluctua/selfconsist.hpp"
#include "fluctua/specfun.hpp"

namespace fluctua::oracle {

/// int_0^inf y^(2n) exp(-p y^2) dy = (2n-1)!! / (2 (2p)^n) sqrt(pi/p).
inline double gaussian_moment(int n, double p) {
  if (n < 0) fail(ErrorKind::domain, "gaussian_moment requires n >= 0");
  if (!(p > 0.0)) fail(ErrorKind::domain, "gaussian_moment requires p > 0");
  return double_factorial(2 * n - 1) / (2.0 * std::pow(2.0 * p, n)) *
         std::sqrt(std::numbers::pi / p);
}

/// int_0^inf phi^(2p-1) exp(-l2 phi^2 - l4 phi^4) dphi through the parabolic
/// cylinder closed form (2 l4)^(-p/2) Gamma(p) D_{-p}(l2/sqrt(2 l4)) exp(l2^2/(8 l4)) / 2.
inline double nongaussian_moment(double p, double lambda2, double lambda4) {
  if (!(lambda4 > 0.0)) fail(ErrorKind::domain, "nongaussian_moment requires lambda4 > 0");
  if (!(p > 0.0)) fail(ErrorKind::domain, "nongaussian_moment requires p > 0");
  const double x = lambda2 / std::sqrt(2.0 * lambda4);
  // exp(l2^2/(8 l4)) = exp(x^2/4) is folded into the scaled D.
  return 0.5 * std::pow(2.0 * lambda4, -0.5 * p) * gamma_fn(p) *
         parabolic_cylinder_D_scaled(-p, x);
}

/// Same integral by direct adaptive quadrature.
inline double nongaussian_moment_quadrature(double p, double lambda2, double lambda4) {
  if (!(lambda4 > 0.0)) fail(ErrorKind::domain, "nongaussian_moment requires lambda4 > 0");
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 4000;
  auto f = [=](double phi) {
    if (phi == 0.0) return p == 0.5 ? 1.0 : 0.0;
    const double phi2 = phi * phi;
    return std::exp((2.0 * p - 1.0) * std::log(phi) - lambda2 * phi2 -
                    lambda4 * phi2 * phi2);
  };
  return integrate(f, spec).value;
}

/// Truncated GLW system: one real amplitude x_i per balanced (q, -q) pair,
///   H = sum_i (a + q_i^2) x_i^2 + (b/V) S^2 + (u0/V^2) S^3,   S = sum_i x_i^2.
struct FewModeSystem {
  std::vector<double> mode_q;
  double a_bare = 1.0;
  double b_bare = 0.0;
  double u0 = 0.0;
  double beta = 1.0;
  double volume_factor = 1.0;

  int n_modes() const { return static_cast<int>(mode_q.size()); }

  void validate() const {
    if (mode_q.empty() || mode_q.size() > 3)
      fail(ErrorKind::validation, "few-mode system needs 1 to 3 modes");
    for (double q : mode_q)
      if (!(q >= 0.0)) fail(ErrorKind::validation, "mode wave numbers must be >= 0");
    if (!(beta > 0.0) || !(volume_factor > 0.0))
      fail(ErrorKind::validation, "beta and volume_factor must be positive");
    if (!(u0 >= 0.0)) fail(ErrorKind::validation, "u0 must be non-negative");
    if (u0 == 0.0) {
      if (b_bare < 0.0) fail(ErrorKind::validation, "b < 0 without u0 is not integrable");
      if (b_bare == 0.0)
        for (double q : mode_q)
          if (!(a_bare + q * q > 0.0))
            fail(ErrorKind::validation, "Gaussian weights must be positive");
    }
  }

  double energy(const double* x) const {
    double quadratic = 0.0, s = 0.0;
    for (int i = 0; i < n_modes(); ++i) {
      const double x2 = x[i] * x[i];
      quadratic += (a_bare + mode_q[i] * mode_q[i]) * x2;
      s += x2;
    }
    const double v = volume_factor;
    return quadratic + b_bare / v * s * s + u0 / (v * v) * s * s * s;
  }
};

namespace detail {

// Nested adaptive quadrature of weight(x) * exp(-beta H(x)) over [0, inf)^n.
template <class W>
double few_mode_integral(const FewModeSystem& sys, const W& weight, double* x, int dim,
                         const QuadratureSpec& spec) {
  const int n = sys.n_modes();
  if (dim == n) return weight(x) * std::exp(-sys.beta * sys.energy(x));
  auto inner = [&](double xi) {
    x[dim] = xi;
    return few_mode_integral(sys, weight, x, dim + 1, spec);
  };
  return integrate(inner, 0.0, infinity, spec).value;
}

}  // namespace detail

/// <x_i^2> = int x_i^2 e^(-beta H) / int e^(-beta H) by tensor-product quadrature.
inline double few_mode_correlator(const FewModeSystem& sys, int mode_index) {
  sys.validate();
  if (mode_index < 0 || mode_index >= sys.n_modes())
    fail(ErrorKind::validation, "mode index out of range");
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-10;
  spec.max_subdivisions = 2000;
  std::vector<double> x(sys.n_modes(), 0.0);
  const double num = detail::few_mode_integral(
      sys, [&](const double* v) { return v[mode_index] * v[mode_index]; }, x.data(), 0, spec);
  const double den =
      detail::few_mode_integral(sys, [](const double*) { return 1.0; }, x.data(), 0, spec);
  return num / den;
}

/// Renormalized Gaussian (Hartree-Fock) prediction for the same system: each
/// mode gets the self-energy Omega_i = d<H_int>/dg_i evaluated with exact Wick
/// contractions at this mode count, and g_i = [2 beta (a + q_i^2 + Omega_i)]^-1
/// is iterated to self-consistency.
struct DecoupledPrediction {
  std::vector<double> correlator;  // g_i
  std::vector<double> omega;       // Omega_i
  int iterations = 0;
};

inline DecoupledPrediction decoupled_prediction(const FewModeSystem& sys,
                                                double tol = 1e-15, int max_iter = 10000) {
  sys.validate();
  const int n = sys.n_modes();
  const double v = sys.volume_factor;
  DecoupledPrediction out;
  out.correlator.assign(n, 0.0);
  out.omega.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double w = sys.a_bare + sys.mode_q[i] * sys.mode_q[i];
    out.correlator[i] = w > 0.0 ? 1.0 / (2.0 * sys.beta * w) : 1.0;
  }
  for (int iter = 1; iter <= max_iter; ++iter) {
    double p1 = 0.0, p2 = 0.0;
    for (double g : out.correlator) {
      p1 += g;
      p2 += g * g;
    }
    double change = 0.0;
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) {
      const double g = out.correlator[i];
      // <S^2> = 2 P2 + P1^2, <S^3> = 8 P3 + 6 P2 P1 + P1^3 for independent Gaussians.
      const double d_s2 = 4.0 * g + 2.0 * p1;
      const double d_s3 = 24.0 * g * g + 12.0 * g * p1 + 6.0 * p2 + 3.0 * p1 * p1;
      out.omega[i] = sys.b_bare / v * d_s2 + sys.u0 / (v * v) * d_s3;
      const double w = sys.a_bare + sys.mode_q[i] * sys.mode_q[i] + out.omega[i];
      if (!(w > 0.0)) fail(ErrorKind::no_solution, "decoupled mode weight turned negative");
      const double target = 1.0 / (2.0 * sys.beta * w);
      next[i] = 0.5 * (g + target);
      change = std::max(change, std::abs(target - g) / target);
    }
    out.iterations = iter;
    if (change < tol) return out;
    out.correlator = next;
  }
  fail(ErrorKind::convergence, "decoupled prediction did not converge");
}

/// Plain bisection on Omega - (K/V)(T/Tc)^2 B^(d/2-2) for d < 4; an independent
/// route to the solve_omega root.
inline double bisect_omega(const ModelParams& p, double T, int iterations = 2000) {
  const double k_over_v = omega_amplitude(p);
  if (k_over_v == 0.0) return 0.0;
  if (!(p.d < 4.0)) fail(ErrorKind::unsupported, "bisect_omega needs d < 4");
  const double scale = p.a0 * p.Tc;
  const double eps = reduced_temperature(p, T);
  auto g = [&](double omega) {
    const double base = eps + omega / scale;
    if (!(base > 0.0)) return -infinity;
    return omega - k_over_v * (T / p.Tc) * (T / p.Tc) * std::pow(base, 0.5 * p.d - 2.0);
  };
  double lo = std::max(0.0, -eps * scale);
  double hi = std::max(1.0, 2.0 * lo);
  while (g(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fluctua::oracle
