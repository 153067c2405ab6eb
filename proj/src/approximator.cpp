#include "bandcast/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bandcast/error.hpp"
#include "bandcast/sinc_ops.hpp"

namespace bandcast {

namespace {

std::string describe_solution(bool unique, double epsilon, SolveMethod method) {
  std::string note = unique ? "unique regime" : "degenerate regime (s-q < 2N+1)";
  if (epsilon > 0.0) {
    note += unique ? "; Tikhonov-shifted solution" : "; unique regularized minimizer of the shifted system";
  } else if (method == SolveMethod::conjugate_gradient) {
    note += unique ? "; unregularized, conjugate gradient from zero"
                   : "; conjugate gradient from zero, minimum-norm minimizer";
  } else {
    note += "; unregularized direct solve";
  }
  return note;
}

Vector synthesize_on(const BandlimitedModel& model, const TimeWindow& window) {
  Vector out(window.sample_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = synthesize(model, window.first() + static_cast<TimeIndex>(i));
  }
  return out;
}

}  // namespace

FitResult fit(const Signal& signal, const FitConfig& config) {
  config.validate();
  const TimeWindow& window = signal.window();
  const SincTable table(window, config.omega, config.half_order);
  const Vector b = analyze(table, signal.values());
  const Matrix system = regularize(gram(table), config.epsilon);
  Matrix design_t = table.matrix();
  for (std::size_t k = 0; k < design_t.rows(); ++k) {
    for (double& v : design_t.row(k)) v *= config.omega / std::numbers::pi;
  }
  const bool unique = is_unique_regime(window, config.half_order);
  // Unregularized and underdetermined: R is singular, so go straight to CG from zero,
  // which lands on the minimum-norm minimizer.
  const bool try_direct = unique || config.epsilon > 0.0;
  SolveOutcome solved = solve_spd_factored(system, b, design_t, signal.values(), config.epsilon,
                                           config.solver_tol, config.effective_max_iter(), try_direct);

  BandlimitedModel model(config.omega, std::move(solved.y));
  Vector fitted = synthesize_on(model, window);
  double sq = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    const double d = fitted[i] - signal.values()[i];
    sq += d * d;
  }

  SolverInfo info{solved.report, describe_solution(unique, config.epsilon, solved.report.method)};
  return FitResult{window,
                   std::move(model),
                   std::move(fitted),
                   std::sqrt(sq),
                   solved.report.achieved_residual,
                   unique,
                   std::move(info)};
}

Vector forecast(const FitResult& result, int horizon) {
  if (horizon < 1) throw InvalidArgument("forecast horizon must be >= 1");
  Vector out(static_cast<std::size_t>(horizon));
  const TimeIndex s = result.window.last();
  for (int h = 1; h <= horizon; ++h) {
    out[static_cast<std::size_t>(h - 1)] = synthesize(result.model, s + h);
  }
  return out;
}

double objective(const Signal& signal, const BandlimitedModel& model) {
  const TimeWindow& w = signal.window();
  double sq = 0.0;
  for (TimeIndex t = w.first(); t <= w.last(); ++t) {
    const double d = synthesize(model, t) - signal.at(t);
    sq += d * d;
  }
  return sq;
}

double objective_regularized(const Signal& signal, const BandlimitedModel& model, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  const auto y = model.coefficients();
  return objective(signal, model) + epsilon * epsilon * dot(y, y);
}

Vector brute_force_fit(const Signal& signal, const FitConfig& config) {
  config.validate();
  const std::size_t n = 2 * static_cast<std::size_t>(config.half_order) + 1;
  if (n > 64) throw InvalidArgument("brute_force_fit is limited to 2N+1 <= 64");

  const Matrix a = design_matrix(signal.window(), config.omega, config.half_order);
  const auto x = signal.values();
  const std::size_t rows = a.rows();

  // Augmented normal equations [A^T A + eps I | A^T x], accumulated from the last row backwards.
  Matrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t t = rows; t-- > 0;) acc += a(t, i) * a(t, j);
      aug(i, j) = acc + (i == j ? config.epsilon : 0.0);
    }
    double acc = 0.0;
    for (std::size_t t = rows; t-- > 0;) acc += a(t, i) * x[t];
    aug(i, n) = acc;
  }

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(aug(i, j)));
  const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(aug(r, col)) > std::abs(aug(pivot, col))) pivot = r;
    }
    if (!(std::abs(aug(pivot, col)) > tiny)) {
      throw SingularSystem("zero pivot in column " + std::to_string(col));
    }
    if (pivot != col) {
      for (std::size_t j = col; j <= n; ++j) std::swap(aug(col, j), aug(pivot, j));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = aug(r, col) / aug(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j <= n; ++j) aug(r, j) -= f * aug(col, j);
    }
  }

  Vector y(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = aug(i, n);
    for (std::size_t j = i + 1; j < n; ++j) s -= aug(i, j) * y[j];
    y[i] = s / aug(i, i);
  }
  return y;
}

FitResult fit_highband(const Signal& signal, const FitConfig& config) {
  const TimeWindow& window = signal.window();
  std::vector<double> modulated(signal.values().begin(), signal.values().end());
  for (std::size_t i = 0; i < modulated.size(); ++i) {
    modulated[i] *= alternating_sign(window.first() + static_cast<TimeIndex>(i));
  }
  FitResult low = fit(Signal(window, std::move(modulated)), config);

  const auto coeffs = low.model.coefficients();
  low.model = BandlimitedModel(low.model.omega(), std::vector<double>(coeffs.begin(), coeffs.end()), Band::high);
  for (std::size_t i = 0; i < low.fitted_values.size(); ++i) {
    low.fitted_values[i] *= alternating_sign(window.first() + static_cast<TimeIndex>(i));
  }
  low.solver_info.note += "; high band via (-1)^t modulation";
  return low;
}

}  // namespace bandcast
