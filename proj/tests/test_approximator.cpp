#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bandcast/approximator.hpp"
#include "bandcast/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace bandcast;
using testing_support::covering_window;
using testing_support::planted_signal;
using testing_support::random_signal;
using std::numbers::pi;

namespace {

Vector coeffs(const FitResult& r) { return {r.model.coefficients().begin(), r.model.coefficients().end()}; }

}  // namespace

TEST(Fit, ZeroSignal) {
  const Signal zero(new_window(-10, 10), std::vector<double>(21, 0.0));
  const FitResult r = fit(zero, {.omega = 0.9, .half_order = 4});
  for (double y : r.model.coefficients()) EXPECT_EQ(y, 0.0);
  EXPECT_EQ(r.residual_l2, 0.0);
  EXPECT_EQ(r.fitted_values.size(), 21u);
}

TEST(Fit, PlantedModelRecoveredWithoutRegularization) {
  std::mt19937_64 rng(61);
  const TimeWindow w = new_window(-11, 11);
  const BandlimitedModel truth(1.0, oracle::random_vector(rng, 11));
  const Signal x = planted_signal(truth, w);
  const FitResult r = fit(x, {.omega = 1.0, .half_order = 5, .epsilon = 0.0});
  EXPECT_TRUE(r.unique_regime);
  const Vector y0(truth.coefficients().begin(), truth.coefficients().end());
  EXPECT_LE(oracle::rel_diff(coeffs(r), y0), 1e-6);
  EXPECT_LE(r.residual_l2, 1e-8 * norm2(x.values()));
}

TEST(Fit, NarrowBandConfiguration) {
  std::mt19937_64 rng(67);
  const TimeWindow w = new_window(-25, 15);
  const FitResult r = fit(random_signal(rng, w), {.omega = 0.4, .half_order = 15, .epsilon = 0.001});
  EXPECT_TRUE(r.unique_regime);
  EXPECT_TRUE(std::isfinite(r.residual_l2));
  EXPECT_EQ(r.solver_info.method, SolveMethod::direct_factorization);
  EXPECT_FALSE(r.solver_info.note.empty());
}

TEST(Fit, ResultInvariants) {
  std::mt19937_64 rng(71);
  const TimeWindow w = new_window(3, 30);
  const Signal x = random_signal(rng, w);
  const FitConfig cfg{.omega = 1.7, .half_order = 6, .epsilon = 1e-2};
  const FitResult r = fit(x, cfg);
  ASSERT_EQ(r.fitted_values.size(), w.sample_count());
  for (TimeIndex t = w.first(); t <= w.last(); ++t) {
    EXPECT_EQ(r.fitted_values[static_cast<std::size_t>(t - w.first())], synthesize(r.model, t));
  }
  EXPECT_NEAR(r.residual_l2 * r.residual_l2, objective(x, r.model), 1e-12);
  const Vector b = analyze(x, cfg.omega, cfg.half_order);
  Vector res = matvec(regularize(gram(w, cfg.omega, cfg.half_order), cfg.epsilon), coeffs(r));
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= b[i];
  EXPECT_DOUBLE_EQ(r.normal_residual, norm2(res));
}

TEST(Fit, RejectsInvalidConfig) {
  const Signal x(new_window(0, 5), std::vector<double>(6, 1.0));
  EXPECT_THROW(fit(x, {.omega = pi, .half_order = 1}), InvalidArgument);
  EXPECT_THROW(fit(x, {.omega = 1.0, .half_order = 1, .epsilon = -1.0}), InvalidArgument);
}

TEST(Forecast, Examples) {
  FitResult zero{new_window(-3, 0), BandlimitedModel::zero(1.0, 2), {0, 0, 0, 0}, 0, 0, false, {}};
  for (double v : forecast(zero, 5)) EXPECT_EQ(v, 0.0);

  FitResult unit{new_window(0, 0), BandlimitedModel(pi / 2, {1.0}), {0.5}, 0, 0, false, {}};
  const Vector f = forecast(unit, 2);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[0], 1.0 / pi, 1e-16);
  EXPECT_NEAR(f[1], 0.0, 1e-16);
  EXPECT_THROW(forecast(unit, 0), InvalidArgument);
}

TEST(Forecast, NarrowBandUsesOnlyTheHistoryWindow) {
  std::mt19937_64 rng(73);
  const TimeWindow w = new_window(-25, 15);
  const Signal x = random_signal(rng, w);
  const FitResult r = fit(x, {.omega = 0.4, .half_order = 15, .epsilon = 0.001});
  const Vector f = forecast(r, 20);
  for (int h = 1; h <= 20; ++h) EXPECT_EQ(f[static_cast<std::size_t>(h - 1)], synthesize(r.model, 15 + h));
}

TEST(Objective, Examples) {
  std::mt19937_64 rng(79);
  const TimeWindow w = new_window(-4, 6);
  const BandlimitedModel m(1.2, oracle::random_vector(rng, 5));
  EXPECT_EQ(objective(planted_signal(m, w), m), 0.0);

  const Signal x = random_signal(rng, w);
  const double energy = dot(x.values(), x.values());
  EXPECT_DOUBLE_EQ(objective(x, BandlimitedModel::zero(1.2, 2)), energy);
  EXPECT_DOUBLE_EQ(objective_regularized(x, BandlimitedModel::zero(1.2, 2), 0.7), energy);
  EXPECT_EQ(objective_regularized(x, m, 0.0), objective(x, m));
}

TEST(Objective, UnregularizedFitIsOptimal) {
  std::mt19937_64 rng(83);
  const TimeWindow w = covering_window(4, 1.3, 3);
  const Signal x = random_signal(rng, w);
  const FitResult r = fit(x, {.omega = 1.3, .half_order = 4, .epsilon = 0.0});
  const double best = objective(x, r.model);
  std::normal_distribution<double> g(0.0, 1e-3);
  for (int i = 0; i < 100; ++i) {
    Vector y = coeffs(r);
    for (auto& v : y) v += g(rng);
    EXPECT_LE(best, objective(x, BandlimitedModel(1.3, y)) + 1e-14);
  }
}

TEST(Objective, RegularizedMinimizerUsesSquaredShift) {
  std::mt19937_64 rng(89);
  const TimeWindow w = new_window(-10, 10);
  const Signal x = random_signal(rng, w);
  const double eps = 0.05;
  const GramMatrix r = gram(w, 0.8, 5);
  const Vector b = analyze(x, 0.8, 5);
  const Vector y = solve_spd(regularize(r, eps * eps), b, 1e-12, 200).y;
  const FitConfig oracle_cfg{.omega = 0.8, .half_order = 5, .epsilon = eps * eps};
  EXPECT_LE(oracle::rel_diff(y, brute_force_fit(x, oracle_cfg)), 1e-10);

  const double best = objective_regularized(x, BandlimitedModel(0.8, y), eps);
  std::normal_distribution<double> g(0.0, 1e-2);
  for (int i = 0; i < 100; ++i) {
    Vector p = y;
    for (auto& v : p) v += g(rng);
    EXPECT_LE(best, objective_regularized(x, BandlimitedModel(0.8, p), eps));
  }
}

TEST(BruteForce, Examples) {
  const Signal zero(new_window(-5, 5), std::vector<double>(11, 0.0));
  for (double v : brute_force_fit(zero, {.omega = 1.0, .half_order = 3})) EXPECT_EQ(v, 0.0);

  const Signal one(new_window(0, 0), {1.0});
  const Vector y = brute_force_fit(one, {.omega = pi / 2, .half_order = 0, .epsilon = 0.0});
  EXPECT_DOUBLE_EQ(y[0], 2.0);

  EXPECT_THROW(brute_force_fit(zero, {.omega = 1.0, .half_order = 32}), InvalidArgument);
  // Rank-deficient normal equations without a shift.
  EXPECT_THROW(brute_force_fit(Signal(new_window(0, 2), {1.0, 2.0, 3.0}), {.omega = 1.0, .half_order = 4, .epsilon = 0.0}),
               SingularSystem);
}

TEST(BruteForce, AgreesWithFit) {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> om(0.1, 3.0);
  std::uniform_int_distribution<int> ord(0, 8), start(-30, 30), len(1, 64);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = ord(rng);
    const double omega = om(rng);
    const int q = start(rng);
    const TimeWindow w = new_window(q, q + len(rng) - 1);
    const Signal x = random_signal(rng, w);
    for (double eps : {1e-3, 1e-2}) {
      const FitConfig cfg{.omega = omega, .half_order = n, .epsilon = eps};
      EXPECT_LE(oracle::rel_diff(coeffs(fit(x, cfg)), brute_force_fit(x, cfg)), 1e-8);
    }
  }
}

TEST(Fit, LinearInTheSignal) {
  std::mt19937_64 rng(101);
  const TimeWindow w = new_window(-15, 20);
  const FitConfig cfg{.omega = 0.7, .half_order = 7, .epsilon = 1e-3};
  for (int trial = 0; trial < 10; ++trial) {
    const Signal x1 = random_signal(rng, w);
    const Signal x2 = random_signal(rng, w);
    const double a = 1.7, b = -0.4;
    std::vector<double> mix;
    for (std::size_t i = 0; i < w.sample_count(); ++i) mix.push_back(a * x1.values()[i] + b * x2.values()[i]);
    const Vector y1 = coeffs(fit(x1, cfg)), y2 = coeffs(fit(x2, cfg));
    Vector expected(y1.size());
    for (std::size_t i = 0; i < y1.size(); ++i) expected[i] = a * y1[i] + b * y2[i];
    EXPECT_LE(oracle::rel_diff(coeffs(fit(Signal(w, mix), cfg)), expected), 1e-10);
  }
}

TEST(Fit, ResidualOrthogonalToBasisWithoutRegularization) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 6;
    const double omega = 1.0 + 0.15 * trial;
    const TimeWindow w = covering_window(n, omega, 4);
    const Signal x = random_signal(rng, w);
    const FitResult r = fit(x, {.omega = omega, .half_order = n, .epsilon = 0.0});
    std::vector<double> d;
    for (std::size_t i = 0; i < w.sample_count(); ++i) d.push_back(x.values()[i] - r.fitted_values[i]);
    EXPECT_LE(norm_inf(analyze(Signal(w, d), omega, n)), 1e-8 * norm2(x.values()));
  }
}

TEST(Fit, IdempotentWithoutRegularization) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 8;
    const double omega = 1.1 + 0.17 * trial;
    const TimeWindow w = covering_window(n, omega, 2);
    const FitConfig cfg{.omega = omega, .half_order = n, .epsilon = 0.0};
    const FitResult first = fit(random_signal(rng, w), cfg);
    const FitResult second = fit(Signal(w, first.fitted_values), cfg);
    EXPECT_LE(oracle::rel_diff(coeffs(second), coeffs(first)), 1e-8);
  }
}

TEST(Fit, DegenerateRegimeReachesTheInterpolationManifold) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 5;
    const double omega = 1.5 + 0.1 * trial;
    const TimeWindow w = new_window(-n + 1, n - 1 + trial % 2);  // 2N-1 or 2N samples
    ASSERT_FALSE(is_unique_regime(w, n));
    const Signal x = random_signal(rng, w);
    const FitResult r = fit(x, {.omega = omega, .half_order = n, .epsilon = 0.0});
    EXPECT_FALSE(r.unique_regime);
    EXPECT_EQ(r.solver_info.method, SolveMethod::conjugate_gradient);
    EXPECT_NE(r.solver_info.note.find("minimum-norm"), std::string::npos);

    const Vector ref = oracle::min_norm_interpolant(w.first(), w.last(), omega, n,
                                                    {x.values().begin(), x.values().end()});
    const double energy = dot(x.values(), x.values());
    EXPECT_NEAR(objective(x, r.model), objective(x, BandlimitedModel(omega, ref)), 1e-8 * energy);
    EXPECT_LE(oracle::rel_diff(coeffs(r), ref), 1e-6);  // CG from zero lands on the minimum-norm point
  }
}

TEST(Fit, DegenerateRegimeWithRegularizationStillForecasts) {
  const Signal x(new_window(0, 0), {1.0});
  const FitResult r = fit(x, {.omega = 1.0, .half_order = 2, .epsilon = 1e-3});
  EXPECT_FALSE(r.unique_regime);
  EXPECT_EQ(forecast(r, 4).size(), 4u);
}

TEST(FitHighband, AlternatingConstantMirrorsLowbandConstant) {
  const TimeWindow w = new_window(-9, 12);
  std::vector<double> alt, flat(w.sample_count(), 2.5);
  for (TimeIndex t = w.first(); t <= w.last(); ++t) alt.push_back(alternating_sign(t) * 2.5);
  const FitConfig cfg{.omega = 0.9, .half_order = 4};
  const FitResult high = fit_highband(Signal(w, alt), cfg);
  const FitResult low = fit(Signal(w, flat), cfg);
  EXPECT_EQ(high.model.band(), Band::high);
  EXPECT_EQ(coeffs(high), coeffs(low));
  for (std::size_t i = 0; i < alt.size(); ++i) {
    EXPECT_EQ(high.fitted_values[i], alternating_sign(w.first() + static_cast<TimeIndex>(i)) * low.fitted_values[i]);
  }
  const Vector fh = forecast(high, 3), fl = forecast(low, 3);
  for (int h = 1; h <= 3; ++h) EXPECT_EQ(fh[h - 1], alternating_sign(w.last() + h) * fl[h - 1]);
}

TEST(FitHighband, ResidualInvariantUnderModulation) {
  std::mt19937_64 rng(113);
  const TimeWindow w = new_window(-20, 7);
  const Signal x = random_signal(rng, w);
  std::vector<double> mod;
  for (TimeIndex t = w.first(); t <= w.last(); ++t) mod.push_back(alternating_sign(t) * x.at(t));
  const FitConfig cfg{.omega = 1.1, .half_order = 5};
  EXPECT_EQ(fit_highband(x, cfg).residual_l2, fit(Signal(w, mod), cfg).residual_l2);
  EXPECT_NEAR(fit_highband(x, cfg).residual_l2 * fit_highband(x, cfg).residual_l2,
              objective(x, fit_highband(x, cfg).model), 1e-12);
}

TEST(FitHighband, SlowSinusoidsPreferTheLowBand) {
  const TimeWindow w = new_window(-30, 30);
  const FitConfig cfg{.omega = 0.6, .half_order = 8};
  for (double f : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    for (double phase : {0.0, 0.7, 2.0}) {
      std::vector<double> v;
      for (TimeIndex t = w.first(); t <= w.last(); ++t) v.push_back(std::cos(f * static_cast<double>(t) + phase));
      const Signal x(w, v);
      EXPECT_GE(fit_highband(x, cfg).residual_l2, fit(x, cfg).residual_l2) << f << " " << phase;
    }
  }
}
