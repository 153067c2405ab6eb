#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bandcast/linalg.hpp"
#include "bandcast/signal_model.hpp"

namespace bandcast {

/// Unnormalized sinc, sin(x)/x, with sinc(0) = 1.
double sinc(double x) noexcept;

/// Coefficient of y_k in the synthesized value at time t: (omega/pi) sinc(k pi + omega t).
double basis_value(int k, TimeIndex t, double omega) noexcept;

/// Unscaled sinc(k pi + omega t) for k = -N..N and t in a window, one row per k.
/// Shared by the Gram, analysis and design-matrix assembly so that each sinc value
/// is evaluated once.
class SincTable {
 public:
  SincTable(const TimeWindow& window, double omega, int half_order);

  const TimeWindow& window() const noexcept { return window_; }
  double omega() const noexcept { return omega_; }
  int half_order() const noexcept { return half_order_; }

  /// Row for coefficient index k in -N..N, ordered by ascending t.
  std::span<const double> row(int k) const { return table_.row(static_cast<std::size_t>(k + half_order_)); }
  /// sinc(k pi + omega t) as (2N+1) rows by sample_count columns; the transposed
  /// design matrix is omega / pi times this.
  const Matrix& matrix() const noexcept { return table_; }

 private:
  TimeWindow window_;
  double omega_;
  int half_order_;
  Matrix table_;
};

/// R = Q*Q over the window, with R_km = (omega/pi)^2 sum_t sinc(m pi + omega t) sinc(k pi + omega t).
struct GramMatrix {
  Matrix entries;  // (2N+1) x (2N+1), index k + N
  double omega;
  TimeWindow window;

  int half_order() const noexcept { return static_cast<int>(entries.rows() / 2); }
  double at(int k, int m) const {
    const int n = half_order();
    return entries(static_cast<std::size_t>(k + n), static_cast<std::size_t>(m + n));
  }
};

/// x_hat(t) = sum_k y_k basis_value(k, t, omega); high-band models carry an extra (-1)^t.
double synthesize(const BandlimitedModel& model, TimeIndex t);

/// (Q*x)_k = (omega/pi) sum_{t=q}^{s} sinc(k pi + omega t) x(t), for k = -N..N.
Vector analyze(const Signal& signal, double omega, int half_order);
Vector analyze(const SincTable& table, std::span<const double> values);

/// A[t - q][k + N] = basis_value(k, t, omega).
Matrix design_matrix(const TimeWindow& window, double omega, int half_order);

GramMatrix gram(const TimeWindow& window, double omega, int half_order);
GramMatrix gram(const SincTable& table);

/// Spectrum of the model at frequency omega_eval in [-pi, pi]; exactly zero outside the band.
std::complex<double> spectrum(const BandlimitedModel& model, double omega_eval);

}  // namespace bandcast
