#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fluctua/observables.hpp"
#include "fluctua/selfconsist.hpp"
#include "support.hpp"

using namespace fluctua;
using testing_support::rel;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams toy() {
  ModelParams p;
  p.u0 = 30.0;
  p.L = 10.0;
  p.x_c = 1.0;
  return p;
}

const std::pair<double, double> kWindow{1e-4, 1e-2};

}  // namespace

TEST(Susceptibility, Values) {
  ModelParams p;
  FluctuationState none;
  EXPECT_EQ(susceptibility(p, 2.0, none), 1.0);
  const ModelParams q = toy();
  const auto cp = solve_critical_point(q);
  const double T = 1.05 * cp.T_star;
  const double w = solve_omega(q, T).omega;
  FluctuationState s;
  s.omega = w;
  EXPECT_EQ(susceptibility(q, T, s), 1.0 / (q.a0 * (T - q.Tc) + w));
}

TEST(Susceptibility, DivergesAtTstarOfCriticalState) {
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  double last = 0.0;
  for (double e : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double chi = susceptibility(p, cp.T_star + e, critical_state(p, cp, cp.T_star + e, false));
    EXPECT_GT(chi, last);
    last = chi;
  }
  EXPECT_GT(last, 1e7);
  FluctuationState at;
  at.omega = p.a0 * p.Tc;  // cancels a(0) exactly
  EXPECT_THROW(susceptibility(p, 0.0, at), Error);
}

TEST(QModeCorrelator, ZeroModeIsHalfTemperatureTimesChi) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    ModelParams p;
    p.a0 = u(rng);
    p.Tc = u(rng);
    p.kB = u(rng);
    const double T = p.Tc + u(rng);
    FluctuationState s;
    s.omega = u(rng);
    const double beta = 1.0 / (p.kB * T);
    EXPECT_LT(rel(2.0 * beta * q_mode_correlator(p, T, s, 0.0), susceptibility(p, T, s)), 4e-16);
  }
}

TEST(QModeCorrelator, InverseSquareAtTstar) {
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  const auto s = critical_state(p, cp, cp.T_star, false);
  const double g1 = q_mode_correlator(p, cp.T_star, s, 1e-3);
  const double g2 = q_mode_correlator(p, cp.T_star, s, 2e-3);
  EXPECT_NEAR(std::log(g1 / g2) / std::log(2.0), 2.0, 1e-6);
  EXPECT_THROW(q_mode_correlator(p, cp.T_star, s, 0.0), Error);
  EXPECT_THROW(q_mode_correlator(p, 1.0, s, -1.0), Error);
}

TEST(CorrelationLength, MirroredAmplitudeRatioIsTwo) {
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  const double dT = 0.01;
  const auto above = critical_state(p, cp, cp.T_star + dT, false);
  const auto below = critical_state(p, cp, cp.T_star - dT, false);
  EXPECT_LT(rel(correlation_length(p, cp.T_star + dT, cp, above) /
                    correlation_length(p, cp.T_star - dT, cp, below),
                2.0),
            1e-14);
  EXPECT_THROW(correlation_length(p, cp.T_star, cp, above), Error);
}

TEST(CorrelationLength, SolvedOmegaValue) {
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  const double T = 1.1 * cp.T_star;
  const auto s = solve_omega(p, T);
  const double expected =
      p.xi0 * std::sqrt(p.Tc) / std::sqrt(T - cp.T_star + (s.omega - cp.omega_c) / p.a0);
  EXPECT_LT(rel(correlation_length(p, T, cp, s), expected), 1e-15);
  EXPECT_LT(rel(correlation_length(p, T, cp, s, 2.0, 1.0), 2.0 * expected), 1e-15);
}

TEST(ReducedLength, LimitsAndScaling) {
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  const auto near = critical_state(p, cp, cp.T_star - 1e-12, false);
  EXPECT_LT(reduced_length(p, cp.T_star - 1e-12, cp, near, 10.0), 1e-4);
  const double T = 0.9 * cp.T_star;
  const auto s = critical_state(p, cp, T, false);
  EXPECT_LT(rel(reduced_length(p, T, cp, s, 20.0), 2.0 * reduced_length(p, T, cp, s, 10.0)), 1e-15);
  EXPECT_LT(rel(reduced_length(p, T, cp, s, 10.0), 10.0 * std::sqrt((cp.T_star - T) / p.Tc)), 1e-14);
  EXPECT_THROW(reduced_length(p, cp.T_star + 0.1, cp, s, 10.0), Error);
  EXPECT_THROW(reduced_length(p, T, cp, s, 0.0), Error);
}

TEST(CorrelationFunction, TabulatedRows) {
  const double xi = 2.0;
  EXPECT_LT(rel(correlation_function(3, xi, xi), std::exp(-1.0) / (4.0 * pi * xi)), 1e-15);
  EXPECT_LT(correlation_function(1, 1e-12, xi), 1e-11);
  EXPECT_LT(rel(correlation_function(2, xi, xi), 0.42102443824070833334 / (2.0 * pi)), 1e-12);
  EXPECT_THROW(correlation_function(4, 1.0, 1.0), Error);
  EXPECT_THROW(correlation_function(3, 0.0, 1.0), Error);
}

TEST(CorrelationFunction, PositiveAndDecreasingBeyondXi) {
  const double xi = 1.5;
  for (int d = 1; d <= 3; ++d) {
    double last = infinity;
    for (double r = 1.01 * xi; r < 30.0 * xi; r *= 1.1) {
      const double g = correlation_function(d, r, xi);
      EXPECT_GT(g, 0.0);
      EXPECT_LT(g, last);
      last = g;
    }
  }
}

TEST(OrderParameter, DisorderedAndLandauLimits) {
  ModelParams p;
  FluctuationState none;
  EXPECT_EQ(order_parameter(p, 1.5, none).psi0, 0.0);
  const auto op = order_parameter(p, 0.5, none);
  EXPECT_EQ(op.f_T, 1.0);
  EXPECT_EQ(op.psi0, std::sqrt(0.5 / (2.0 * p.b)));
}

TEST(OrderParameter, AmplitudePrefactorRelation) {
  const ModelParams p = toy();
  const double T = 0.8;
  const auto cp = solve_critical_point(p);
  // Solved Omega keeps a* positive; the ordered side needs the frozen state.
  EXPECT_GT(order_parameter(p, T, solve_fluctuations(p, T)).a_star, 0.0);
  const auto op = order_parameter(p, T, critical_state(p, cp, T, true));
  ASSERT_LT(op.a_star, 0.0);
  EXPECT_LT(rel(op.psi0 * op.psi0 * 2.0 * op.b_star, std::abs(op.a_star)), 1e-15);
  // psi0 = f(T) phi0 whenever a* and a share a sign.
  const auto frozen = critical_state(p, cp, 0.9, true);
  const auto op2 = order_parameter(p, 0.9, frozen);
  const double a2 = p.a0 * (0.9 - p.Tc);
  EXPECT_LT(rel(op2.psi0, op2.f_T * std::sqrt(std::abs(a2) / (2.0 * p.b))), 1e-14);
}

TEST(OrderParameter, StabilityAndDomainErrors) {
  ModelParams p;
  p.b = -1.0;
  FluctuationState none;
  try {
    order_parameter(p, 0.5, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::stability);
  }
  ModelParams q;
  EXPECT_THROW(order_parameter(q, q.Tc, none), Error);
}

TEST(EquationOfState, Values) {
  OrderParameterPoint op;
  op.a_star = 1.0;
  op.b_star = 1.0;
  EXPECT_EQ(equation_of_state(op, 1.0), 6.0);
  op.a_star = 0.0;
  op.b_star = 0.7;
  for (double psi : {0.1, 1.0, 2.0})
    EXPECT_LT(rel(equation_of_state(op, psi) / (psi * psi * psi), 4.0 * op.b_star), 1e-15);
  // delta = 3 from the log-log slope of the critical isotherm.
  EXPECT_NEAR(std::log(equation_of_state(op, 2.0) / equation_of_state(op, 1.0)) / std::log(2.0),
              3.0, 1e-14);
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  for (double T : {0.5, 0.8, 0.95}) {
    const auto o = order_parameter(p, T, critical_state(p, cp, T, true));
    ASSERT_LT(o.a_star, 0.0);
    EXPECT_NEAR(equation_of_state(o, o.psi0), 0.0, 1e-12);
  }
}

TEST(SpecificHeatJump, LandauLimitAndSuppression) {
  ModelParams p = toy();
  CriticalPoint none;
  none.T_star = p.Tc;
  EXPECT_EQ(specific_heat_jump(p, none), 1000.0 * p.Tc * p.a0 * p.a0 / (2.0 * p.b));
  double last = infinity;
  for (double u0 : {1.0, 10.0, 100.0}) {
    p.u0 = u0;
    const double jump = specific_heat_jump(p, solve_critical_point(p));
    EXPECT_LT(jump, last);
    last = jump;
  }
  CriticalPoint full;
  full.omega_c = p.a0 * p.Tc;
  EXPECT_EQ(specific_heat_jump(p, full), 0.0);
  p.L = infinity;
  EXPECT_THROW(specific_heat_jump(p, none), Error);
}

TEST(FitExponent, SyntheticPowerLaw) {
  ModelParams p;
  const double T_star = 0.97;
  const auto grid = critical_window_grid(T_star, p.Tc, Side::above, kWindow, 40);
  const auto curve = make_curve("synthetic", "1", grid,
                                [&](double T) { return std::pow((T - T_star) / p.Tc, -1.75); }, p);
  const auto fit = fit_exponent(curve, T_star, p.Tc, Side::above, kWindow);
  EXPECT_NEAR(fit.exponent, 1.75, 1e-6);
  EXPECT_LT(fit.std_error, 1e-6);
  EXPECT_EQ(fit.points, 40);
  const auto below = critical_window_grid(T_star, p.Tc, Side::below, kWindow, 30);
  const auto vanishing = make_curve("v", "1", below,
                                    [&](double T) { return std::pow((T_star - T) / p.Tc, 0.3); }, p);
  EXPECT_NEAR(fit_exponent(vanishing, T_star, p.Tc, Side::below, kWindow, PowerLaw::vanishing).exponent,
              0.3, 1e-6);
}

TEST(FitExponent, ErrorsOnThinOrBadData) {
  ModelParams p;
  const auto grid = critical_window_grid(0.9, 1.0, Side::above, kWindow, 5);
  const auto curve = make_curve("few", "1", grid, [](double) { return 1.0; }, p);
  EXPECT_THROW(fit_exponent(curve, 0.9, 1.0, Side::above, kWindow), Error);
  const auto grid2 = critical_window_grid(0.9, 1.0, Side::above, kWindow, 20);
  const auto negative = make_curve("neg", "1", grid2, [](double) { return -1.0; }, p);
  EXPECT_THROW(fit_exponent(negative, 0.9, 1.0, Side::above, kWindow), Error);
}

TEST(FitExponent, MeanFieldExponentsFromCriticalState) {
  const ModelParams p = toy();
  const auto cp = solve_critical_point(p);
  const auto above = critical_window_grid(cp.T_star, p.Tc, Side::above, kWindow, 41);
  const auto below = critical_window_grid(cp.T_star, p.Tc, Side::below, kWindow, 41);
  auto state = [&](double T, bool theta) { return critical_state(p, cp, T, theta); };
  const auto chi = make_curve("chi", "1/energy", above,
                              [&](double T) { return susceptibility(p, T, state(T, false)); }, p);
  const auto xi = make_curve("xi", "length", above,
                             [&](double T) { return correlation_length(p, T, cp, state(T, false)); }, p);
  const auto psi = make_curve("psi0", "1", below,
                              [&](double T) { return order_parameter(p, T, state(T, true)).psi0; }, p);
  EXPECT_NEAR(fit_exponent(chi, cp.T_star, p.Tc, Side::above, kWindow).exponent, 1.0, 0.01);
  EXPECT_NEAR(fit_exponent(xi, cp.T_star, p.Tc, Side::above, kWindow).exponent, 0.5, 0.01);
  EXPECT_NEAR(fit_exponent(psi, cp.T_star, p.Tc, Side::below, kWindow, PowerLaw::vanishing).exponent,
              0.5, 0.01);
}

TEST(ScalingRelations, TabulatedSets) {
  ExponentSet mf{0.0, 0.5, 1.0, 3.0, 0.5, 0.0, {}};
  for (double r : check_scaling_relations(mf, 4.0)) EXPECT_EQ(r, 0.0);
  ExponentSet d3{0.5, 0.5, 1.0, 3.0, 0.5, 0.0, {}};
  const auto r3 = check_scaling_relations(d3, 3.0);
  EXPECT_EQ(r3[0], 0.0);
  EXPECT_EQ(r3[2], 0.5);
  ExponentSet zero{};
  const auto rz = check_scaling_relations(zero, 3.0);
  EXPECT_EQ(rz[0], 2.0);
  EXPECT_EQ(rz[1], 2.0);
  EXPECT_EQ(rz[2], 2.0);
  EXPECT_EQ(rz[3], 0.0);
}

TEST(ObservableCurve, CsvAndValidation) {
  ModelParams p;
  const auto curve = make_curve("chi", "1/energy", {1.0, 1.5, 2.0},
                                [](double T) { return 1.0 / T; }, p);
  std::ostringstream out;
  curve.write_csv(out);
  EXPECT_EQ(out.str(), "T,chi\n1,1\n1.5,0.6666666666666666\n2,0.5\n");
  EXPECT_EQ(curve.params_hash, params_digest(p));
  EXPECT_EQ(curve.params_hash.size(), 16u);
  ModelParams q = p;
  q.u0 = 2.0;
  EXPECT_NE(params_digest(q), params_digest(p));
  EXPECT_THROW(make_curve("bad", "1", {2.0, 1.0}, [](double) { return 1.0; }, p), Error);
  EXPECT_THROW(make_curve("nan", "1", {1.0, 2.0}, [](double) { return std::nan(""); }, p), Error);
}
