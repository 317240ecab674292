#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "fluctua/error.hpp"
#include "fluctua/quadrature.hpp"

namespace fluctua {

/// Gamma function for positive real arguments.
inline double gamma_fn(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg << "gamma_fn requires z > 0, got " << z;
    fail(ErrorKind::domain, msg.str());
  }
  return std::tgamma(z);
}

/// Modified Bessel function of the second kind, order zero.
inline double bessel_k0(double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "bessel_k0 requires x > 0, got " << x;
    fail(ErrorKind::domain, msg.str());
  }
  return std::cyl_bessel_k(0.0, x);
}

/// k!! for k >= -1, with (-1)!! = 0!! = 1.
inline double double_factorial(int k) {
  if (k < -1) fail(ErrorKind::domain, "double_factorial requires k >= -1");
  double r = 1.0;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

namespace detail {

// I(p, x) = int_0^inf t^(p-1) exp(-t^2/2 - x t) dt.
inline double parabolic_cylinder_kernel(double p, double x) {
  QuadratureSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 4000;
  if (p < 1.0) {
    // t = u^(1/p) removes the endpoint singularity of t^(p-1).
    const double inv_p = 1.0 / p;
    auto g = [=](double u) {
      if (u == 0.0) return 1.0;
      const double t = std::pow(u, inv_p);
      return std::exp(-0.5 * t * t - x * t);
    };
    return integrate(g, 0.0, infinity, spec).value * inv_p;
  }
  auto g = [=](double t) {
    if (t == 0.0) return p == 1.0 ? 1.0 : 0.0;
    return std::exp((p - 1.0) * std::log(t) - 0.5 * t * t - x * t);
  };
  return integrate(g, 0.0, infinity, spec).value;
}

inline void check_negative_order(double order) {
  if (!(order < 0.0)) {
    std::ostringstream msg;
    msg << "parabolic cylinder function implemented for negative order only, got "
        << order;
    fail(ErrorKind::domain, msg.str());
  }
}

}  // namespace detail

/// Parabolic cylinder function D_order(arg) for order = -p, p > 0, from
/// D_{-p}(x) = exp(-x^2/4)/Gamma(p) * int_0^inf t^(p-1) exp(-t^2/2 - x t) dt.
inline double parabolic_cylinder_D(double order, double arg) {
  detail::check_negative_order(order);
  const double p = -order;
  return std::exp(-0.25 * arg * arg) * detail::parabolic_cylinder_kernel(p, arg) /
         gamma_fn(p);
}

/// exp(arg^2/4) * D_order(arg); finite where the two factors over/underflow.
inline double parabolic_cylinder_D_scaled(double order, double arg) {
  detail::check_negative_order(order);
  const double p = -order;
  return detail::parabolic_cylinder_kernel(p, arg) / gamma_fn(p);
}

}  // namespace fluctua
