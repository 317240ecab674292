#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "fluctua/error.hpp"

namespace fluctua {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  // Either finite and positive or `infinity`.
  double upper_limit = infinity;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      fail(ErrorKind::validation, "quadrature tolerances must be positive");
    if (max_subdivisions < 1)
      fail(ErrorKind::validation, "max_subdivisions must be positive");
    if (!(upper_limit > 0.0))
      fail(ErrorKind::validation, "quadrature upper limit must be positive");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err};
}

template <class F>
QuadratureResult adaptive(const F& f, double a, double b, const QuadratureSpec& spec) {
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int subdivisions = 0;
  auto done = [&] {
    return total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  };
  while (!done()) {
    if (!std::isfinite(total))
      throw AccuracyError("integrand produced a non-finite value", total, total_err);
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge after " << subdivisions
          << " subdivisions (estimate " << total << ", error " << total_err << ")";
      throw AccuracyError(msg.str(), total, total_err);
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval at floating-point resolution; accept what we have if close.
      throw AccuracyError("quadrature interval reached machine resolution", total,
                          total_err);
    }
    heap.pop();
    Segment left = gauss_kronrod15(f, worst.a, mid);
    Segment right = gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum for a drift-free total.
  double value = 0.0, err = 0.0;
  std::vector<Segment> segments;
  segments.reserve(heap.size());
  while (!heap.empty()) {
    segments.push_back(heap.top());
    heap.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : segments) {
    value += s.value;
    err += s.error;
  }
  return {value, err, subdivisions};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over (lower, upper).
/// An infinite upper limit is mapped onto (0, 1) through x = lower + t/(1-t).
template <class F>
QuadratureResult integrate(const F& f, double lower, double upper,
                           const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(upper > lower)) fail(ErrorKind::validation, "integration range is empty");
  if (std::isinf(upper)) {
    auto mapped = [&](double t) {
      const double s = 1.0 - t;
      const double x = lower + t / s;
      const double y = f(x);
      return y == 0.0 ? 0.0 : y / (s * s);
    };
    return detail::adaptive(mapped, 0.0, 1.0, spec);
  }
  return detail::adaptive(f, lower, upper, spec);
}

/// Integral of f over (0, spec.upper_limit).
template <class F>
QuadratureResult integrate(const F& f, const QuadratureSpec& spec = {}) {
  return integrate(f, 0.0, spec.upper_limit, spec);
}

}  // namespace fluctua
