#pragma once

#include <cmath>
#include <numbers>

// Reference integrators for the tests. They share no code with the library
// quadrature: fixed-step double-exponential rules, accurate to ~1e-14 for
// integrands analytic on the open interval.
namespace testing_support {

/// int_0^inf f(x) dx with x = exp(pi/2 sinh t).
template <class F>
double exp_sinh(F&& f, double h = 1.0 / 256.0, double t_max = 5.0) {
  double sum = 0.0;
  for (double t = -t_max; t <= t_max; t += h) {
    const double x = std::exp(0.5 * std::numbers::pi * std::sinh(t));
    const double w = x * 0.5 * std::numbers::pi * std::cosh(t);
    const double v = f(x);
    if (std::isfinite(v)) sum += v * w;
  }
  return sum * h;
}

/// int_a^b f(x) dx with the tanh-sinh map.
template <class F>
double tanh_sinh(F&& f, double a, double b, double h = 1.0 / 256.0, double t_max = 4.0) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (double t = -t_max; t <= t_max; t += h) {
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double u = std::tanh(s);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
    const double x = mid + half * u;
    if (x <= a || x >= b) continue;
    sum += f(x) * w;
  }
  return sum * h * half;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_support
