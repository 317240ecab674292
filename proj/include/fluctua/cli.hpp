#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluctua/applications.hpp"
#include "fluctua/config.hpp"
#include "fluctua/error.hpp"
#include "fluctua/format.hpp"
#include "fluctua/observables.hpp"
#include "fluctua/oracle.hpp"
#include "fluctua/selfconsist.hpp"

namespace fluctua::cli {

using config::RunConfig;
using ordered_json = nlohmann::ordered_json;

/// 0 success, 1 oracle check failed, 2 invalid input, 3 solver failure, 4 I/O.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::convergence:
    case ErrorKind::accuracy: return 3;
    case ErrorKind::io: return 4;
    default: return 2;
  }
}

inline std::string error_json(const Error& e) {
  ordered_json j;
  j["error"] = std::string(to_string(e.kind()));
  j["message"] = e.what();
  return j.dump();
}

// ---------------------------------------------------------------------------
// critical

inline ordered_json critical_report(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const CriticalPoint cp = solve_critical_point(p);
  ordered_json j;
  j["Tc"] = p.Tc;
  j["T_star"] = cp.T_star;
  j["omega_c"] = cp.omega_c;
  j["ginzburg_width"] = cp.ginzburg_width;
  j["eq30_residual"] = cp.eq30_residual;
  j["nu_d"] = nu_d(cp, p);
  j["u0"] = p.u0;
  j["params_hash"] = params_digest(p);
  return j;
}

// ---------------------------------------------------------------------------
// sweep

enum class OmegaMode { critical, solved };

inline OmegaMode parse_omega_mode(const std::string& s) {
  if (s == "critical") return OmegaMode::critical;
  if (s == "solved") return OmegaMode::solved;
  fail(ErrorKind::validation, "omega mode must be 'critical' or 'solved', got '" + s + "'");
}

inline const std::vector<std::string>& sweep_observables() {
  static const std::vector<std::string> names = {"omega", "theta", "chi", "xi",
                                                 "heat_capacity", "psi0", "f_T"};
  return names;
}

inline config::GridSpec default_sweep_grid(const ModelParams& p) {
  return {0.5 * p.Tc, 1.5 * p.Tc, 101};
}

/// Evaluates one observable at one temperature.
inline double sweep_value(const ModelParams& p, const CriticalPoint& cp,
                          const std::string& observable, OmegaMode mode, double T) {
  if (observable == "omega") return solve_omega(p, T).omega;
  if (observable == "theta") return solve_fluctuations(p, T).theta;
  const bool needs_theta = observable == "psi0" || observable == "f_T";
  const FluctuationState state = mode == OmegaMode::critical
                                     ? critical_state(p, cp, T, needs_theta)
                                     : (needs_theta ? solve_fluctuations(p, T) : solve_omega(p, T));
  if (observable == "chi") return susceptibility(p, T, state);
  if (observable == "xi") return correlation_length(p, T, cp, state);
  if (observable == "heat_capacity") return heat_capacity_gaussian(p, T, state);
  const OrderParameterPoint op = order_parameter(p, T, state);
  return observable == "psi0" ? op.psi0 : op.f_T;
}

/// Writes `T,<observable>`; per-point failures become empty cells and are
/// returned as warning lines.
inline std::vector<std::string> sweep(const RunConfig& cfg, const std::string& observable,
                                      OmegaMode mode, std::ostream& out) {
  const auto& names = sweep_observables();
  if (std::find(names.begin(), names.end(), observable) == names.end())
    fail(ErrorKind::validation, "unknown observable '" + observable + "'");
  const auto& p = cfg.params;
  const auto grid = cfg.grid.value_or(default_sweep_grid(p)).values();
  for (double T : grid)
    if (!(T > 0.0)) fail(ErrorKind::validation, "sweep temperatures must be positive");
  const CriticalPoint cp = solve_critical_point(p);
  std::vector<std::string> warnings;
  write_csv_header(out, {"T", observable});
  for (double T : grid) {
    std::optional<double> value;
    try {
      value = sweep_value(p, cp, observable, mode, T);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::convergence || e.kind() == ErrorKind::accuracy) throw;
      warnings.push_back("T=" + format_number(T) + " " + std::string(to_string(e.kind())) +
                         ": " + e.what());
    }
    write_csv_row(out, {T, value});
  }
  return warnings;
}

// ---------------------------------------------------------------------------
// film

inline std::vector<double> default_l0_grid() {
  return {std::numbers::pi, 4.0, 5.0, 10.0, 100.0, 1e4, 1e6};
}

/// Writes `l0,T_star_film`; films without an ordered phase get NO_TRANSITION.
inline void film(const RunConfig& cfg, std::ostream& out) {
  const auto l0s = cfg.l0.empty() ? default_l0_grid() : cfg.l0;
  for (double l0 : l0s)
    if (!(l0 > 0.0)) fail(ErrorKind::validation, "l0 values must be positive");
  const CriticalPoint cp = solve_critical_point(cfg.params);
  write_csv_header(out, {"l0", "T_star_film"});
  for (double l0 : l0s) {
    const FilmTransition t = film_tc_renormalized(FilmParams{l0, cfg.params}, cp);
    out << format_number(l0) << ',';
    if (t.has_transition)
      out << format_number(t.temperature);
    else
      out << "NO_TRANSITION";
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// paracond

inline Geometry geometry_for(int dim, const std::optional<Geometry>& configured) {
  if (configured && fluctua::detail::geometry_dimension(*configured) == dim) return *configured;
  switch (dim) {
    case 3: return Bulk3D{};
    case 2: return Film{1.0};
    case 1: return Wire{1.0, 1.0};
    default: break;
  }
  fail(ErrorKind::validation, "paraconductivity dimension must be 1, 2 or 3");
}

/// Writes `epsilon_star,sigma` above T*_c after a `# aleph_d` comment line.
/// Omega is re-solved at every T unless the critical (frozen) mode is asked for.
inline void paracond(const RunConfig& cfg, int dim, std::ostream& out,
                     OmegaMode mode = OmegaMode::solved) {
  SuperconductorParams sp;
  sp.constants = cfg.constants;
  sp.geometry = geometry_for(dim, cfg.geometry);
  sp.base = cfg.params;
  sp.base.d = dim;
  sp.validate();
  const CriticalPoint cp = solve_critical_point(sp.base);
  const auto spec = cfg.grid.value_or(
      config::GridSpec{cp.T_star + 1e-3 * sp.base.Tc, cp.T_star + 1e-1 * sp.base.Tc, 100});
  const auto grid = spec.values();
  if (!(grid.front() > cp.T_star)) {
    std::ostringstream msg;
    msg << "paracond grid must lie above T*_c = " << format_number(cp.T_star)
        << ", first point is " << format_number(grid.front());
    fail(ErrorKind::validation, msg.str());
  }
  const double aleph_value = aleph(dim);
  out << "# aleph_d=" << format_number(aleph_value) << " d=" << dim
      << " T_star=" << format_number(cp.T_star) << '\n';
  write_csv_header(out, {"epsilon_star", "sigma"});
  for (double T : grid) {
    const FluctuationState state =
        mode == OmegaMode::solved ? solve_omega(sp.base, T) : critical_state(sp.base, cp, T, false);
    const double sigma = paraconductivity_with_aleph(sp, T, state, cp, aleph_value);
    write_csv_row(out, {(T - cp.T_star) / sp.base.Tc, sigma});
  }
}

// ---------------------------------------------------------------------------
// oracle

struct CheckResult {
  std::string name;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct OracleReport {
  std::vector<CheckResult> checks;
  double few_mode_u0 = 0.0;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }

  ordered_json to_json() const {
    ordered_json j;
    j["all_passed"] = all_passed();
    j["few_mode_u0"] = few_mode_u0;
    j["checks"] = ordered_json::array();
    for (const auto& c : checks)
      j["checks"].push_back({{"name", c.name},
                             {"max_rel_error", c.max_rel_error},
                             {"tolerance", c.tolerance},
                             {"passed", c.passed}});
    return j;
  }
};

namespace detail {

inline double rel_error(double value, double reference) {
  if (value == reference) return 0.0;
  return std::abs(value - reference) / std::abs(reference);
}

inline CheckResult make_check(std::string name, double err, double tol) {
  return {std::move(name), err, tol, err <= tol};
}

/// Portable uniform draw in [lo, hi) from the raw engine output.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace detail

inline OracleReport run_oracle(const RunConfig& cfg) {
  using detail::make_check;
  using detail::rel_error;
  OracleReport report;
  const double pi = std::numbers::pi;

  // Integral constants against their literal values.
  const std::array<double, 3> aleph_literal = {pi / 16.0, 1.0 / 16.0, 1.0 / 32.0};
  auto aleph_used = [&](int d) {
    if (cfg.oracle.aleph_value && cfg.oracle.aleph_dim == d) return *cfg.oracle.aleph_value;
    return aleph(d);
  };
  double err = 0.0;
  for (int d = 1; d <= 3; ++d) err = std::max(err, rel_error(aleph_used(d), aleph_literal[d - 1]));
  report.checks.push_back(make_check("aleph_constants", err, 1e-10));

  // General paraconductivity with aleph_d against the specialized closed forms.
  for (int d = 1; d <= 3; ++d) {
    SuperconductorParams sp;
    sp.constants = cfg.constants;
    sp.geometry = cli::geometry_for(d, std::nullopt);
    sp.base.d = d;
    sp.base.L = infinity;
    const CriticalPoint cp = solve_critical_point(sp.base);
    double worst = 0.0;
    for (double T : {1.001, 1.01, 1.1, 1.5}) {
      FluctuationState st;
      st.T = T;
      worst = std::max(worst, rel_error(paraconductivity_with_aleph(sp, T, st, cp, aleph_used(d)),
                                        paraconductivity_closed_form(sp, T, st, cp)));
    }
    report.checks.push_back(
        make_check("paraconductivity_consistency_d" + std::to_string(d), worst, 1e-10));
  }

  // Dimension integrals against Gamma-function closed forms.
  err = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const double h = 0.5 * d;
    err = std::max(err, rel_error(dimension_integral(DimensionIntegral::I2, d, infinity),
                                  gamma_fn(h) * gamma_fn(2.0 - h) / 2.0));
    err = std::max(err, rel_error(dimension_integral(DimensionIntegral::I3, d, infinity),
                                  gamma_fn(h + 1.0) * gamma_fn(2.0 - h) / 4.0));
  }
  report.checks.push_back(make_check("dimension_integrals", err, 1e-10));

  // Non-Gaussian single-site identity.
  err = 0.0;
  for (double p : {0.5, 1.0, 2.0, 3.0})
    for (double l2 : {-1.0, 0.0, 1.0, 4.0})
      for (double l4 : {0.25, 1.0})
        err = std::max(err, rel_error(oracle::nongaussian_moment(p, l2, l4),
                                      oracle::nongaussian_moment_quadrature(p, l2, l4)));
  report.checks.push_back(make_check("nongaussian_identity", err, 1e-8));

  // Gaussian moments against quadrature.
  err = 0.0;
  QuadratureSpec qs;
  qs.abs_tol = 1e-300;
  qs.rel_tol = 1e-12;
  for (int n = 0; n <= 4; ++n)
    for (double p : {0.5, 1.0, 2.0}) {
      const double q = integrate([&](double y) { return std::pow(y, 2 * n) * std::exp(-p * y * y); }, qs).value;
      err = std::max(err, rel_error(oracle::gaussian_moment(n, p), q));
    }
  report.checks.push_back(make_check("gaussian_moments", err, 1e-10));

  // Fixed point against plain bisection at random draws.
  err = 0.0;
  std::mt19937_64 rng(20240607);
  for (int i = 0; i < 10; ++i) {
    ModelParams p;
    p.d = detail::uniform(rng, 1.0, 3.9);
    p.L = detail::uniform(rng, 3.0, 30.0);
    p.u0 = detail::uniform(rng, 1.0, 100.0);
    p.a0 = detail::uniform(rng, 0.5, 2.0);
    const double T = detail::uniform(rng, 0.3, 2.0);
    err = std::max(err, rel_error(solve_omega(p, T).omega, oracle::bisect_omega(p, T)));
  }
  report.checks.push_back(make_check("fixed_point_bisection", err, 1e-10));

  // Few-mode system: Gaussian limit, then the renormalized Gaussian prediction.
  oracle::FewModeSystem sys{{0.0, 0.5, 1.0}, 1.0, 0.0, 0.0, 1.0, 1.0};
  err = 0.0;
  for (int i = 0; i < sys.n_modes(); ++i) {
    const double q = sys.mode_q[i];
    err = std::max(err, rel_error(oracle::few_mode_correlator(sys, i),
                                  1.0 / (2.0 * sys.beta * (sys.a_bare + q * q))));
  }
  report.checks.push_back(make_check("few_mode_gaussian_limit", err, 1e-8));

  sys.u0 = cfg.oracle.u0.value_or(cfg.params.u0 == 0.0 ? 0.0 : 0.01);
  report.few_mode_u0 = sys.u0;
  const auto prediction = oracle::decoupled_prediction(sys);
  err = 0.0;
  for (int i = 0; i < sys.n_modes(); ++i)
    err = std::max(err, rel_error(prediction.correlator[i], oracle::few_mode_correlator(sys, i)));
  report.checks.push_back(make_check("few_mode_decoupling", err, 0.05));
  return report;
}

}  // namespace fluctua::cli
