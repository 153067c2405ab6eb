#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bandcast/linalg.hpp"

namespace bandcast {

using TimeIndex = std::int64_t;

/// The finite observation index set {q, ..., s}.
class TimeWindow {
 public:
  /// Throws EmptyWindow if q > s.
  TimeWindow(TimeIndex q, TimeIndex s);

  TimeIndex first() const noexcept { return q_; }
  TimeIndex last() const noexcept { return s_; }
  std::size_t sample_count() const noexcept { return static_cast<std::size_t>(s_ - q_ + 1); }
  bool contains(TimeIndex t) const noexcept { return t >= q_ && t <= s_; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;

 private:
  TimeIndex q_;
  TimeIndex s_;
};

TimeWindow new_window(TimeIndex q, TimeIndex s);

/// True iff s - q >= 2N + 1, the condition under which the optimal band-limited
/// approximant and its extrapolation are unique. When false the minimizers form a
/// linear manifold and a regularized solve returns one representative.
bool is_unique_regime(const TimeWindow& window, int half_order);

/// Real samples x(q), ..., x(s).
class Signal {
 public:
  /// Throws InvalidArgument if the length does not match the window or a value is not finite.
  Signal(TimeWindow window, std::vector<double> values);

  const TimeWindow& window() const noexcept { return window_; }
  std::span<const double> values() const noexcept { return values_; }
  double at(TimeIndex t) const { return values_.at(static_cast<std::size_t>(t - window_.first())); }

 private:
  TimeWindow window_;
  std::vector<double> values_;
};

struct FitConfig {
  double omega = 0.0;      // band edge, radians per sample, 0 < omega < pi
  int half_order = 0;      // N; the model has 2N+1 coefficients
  double epsilon = 1e-3;   // Tikhonov shift added to the Gram diagonal
  double solver_tol = 1e-10;
  int solver_max_iter = 0;  // 0 selects 10 * (2N+1)

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
  int effective_max_iter() const noexcept {
    return solver_max_iter > 0 ? solver_max_iter : 10 * (2 * half_order + 1);
  }
};

/// Which spectral band the model occupies. `high` models are supported on
/// [-pi, -pi + omega] U [pi - omega, pi] and are evaluated as (-1)^t times the
/// low-band synthesis.
enum class Band { low, high };

/// Coefficients y_k, k = -N..N (stored at k + N), of a process whose spectrum is
/// sum_k y_k exp(i k w pi / omega) on |w| <= omega.
class BandlimitedModel {
 public:
  BandlimitedModel(double omega, std::vector<double> coefficients, Band band = Band::low);

  static BandlimitedModel zero(double omega, int half_order) {
    return BandlimitedModel(omega, std::vector<double>(2 * static_cast<std::size_t>(half_order) + 1, 0.0));
  }

  double omega() const noexcept { return omega_; }
  int half_order() const noexcept { return static_cast<int>(coefficients_.size() / 2); }
  Band band() const noexcept { return band_; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  double coefficient(int k) const { return coefficients_.at(static_cast<std::size_t>(k + half_order())); }

 private:
  double omega_;
  std::vector<double> coefficients_;
  Band band_;
};

/// (-1)^t for any integer t.
constexpr double alternating_sign(TimeIndex t) noexcept { return (t & 1) != 0 ? -1.0 : 1.0; }

}  // namespace bandcast
