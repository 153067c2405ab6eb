#include "bandcast/sinc_ops.hpp"

#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace bandcast {

namespace {

constexpr double kPi = std::numbers::pi;

// sinc(k pi + omega t); the argument is formed exactly as written.
inline double shifted_sinc(int k, TimeIndex t, double omega) noexcept {
  return sinc(static_cast<double>(k) * kPi + omega * static_cast<double>(t));
}

}  // namespace

double sinc(double x) noexcept {
  if (std::abs(x) < 1e-6) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double basis_value(int k, TimeIndex t, double omega) noexcept {
  return omega / kPi * shifted_sinc(k, t, omega);
}

SincTable::SincTable(const TimeWindow& window, double omega, int half_order)
    : window_(window),
      omega_(omega),
      half_order_(half_order),
      table_(2 * static_cast<std::size_t>(half_order) + 1, window.sample_count()) {
  for (int k = -half_order; k <= half_order; ++k) {
    auto row = table_.row(static_cast<std::size_t>(k + half_order));
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = shifted_sinc(k, window.first() + static_cast<TimeIndex>(j), omega);
    }
  }
}

double synthesize(const BandlimitedModel& model, TimeIndex t) {
  const int n = model.half_order();
  const auto y = model.coefficients();
  double acc = 0.0;
  for (int k = -n; k <= n; ++k) {
    acc += y[static_cast<std::size_t>(k + n)] * basis_value(k, t, model.omega());
  }
  return model.band() == Band::high ? alternating_sign(t) * acc : acc;
}

Vector analyze(const SincTable& table, std::span<const double> values) {
  const int n = table.half_order();
  const double scale = table.omega() / kPi;
  Vector b(2 * static_cast<std::size_t>(n) + 1);
  for (int k = -n; k <= n; ++k) {
    b[static_cast<std::size_t>(k + n)] = scale * dot(table.row(k), values);
  }
  return b;
}

Vector analyze(const Signal& signal, double omega, int half_order) {
  return analyze(SincTable(signal.window(), omega, half_order), signal.values());
}

Matrix design_matrix(const TimeWindow& window, double omega, int half_order) {
  Matrix a(window.sample_count(), 2 * static_cast<std::size_t>(half_order) + 1);
  for (std::size_t j = 0; j < a.rows(); ++j) {
    const TimeIndex t = window.first() + static_cast<TimeIndex>(j);
    for (int k = -half_order; k <= half_order; ++k) {
      a(j, static_cast<std::size_t>(k + half_order)) = basis_value(k, t, omega);
    }
  }
  return a;
}

GramMatrix gram(const SincTable& table) {
  const int n = table.half_order();
  const std::size_t dim = 2 * static_cast<std::size_t>(n) + 1;
  const double scale = table.omega() / kPi;
  const double scale2 = scale * scale;
  Matrix r(dim, dim);
  const double work = 0.5 * static_cast<double>(dim * dim) * static_cast<double>(table.window().sample_count());
  // Each entry is one ascending-t dot product, so the result does not depend on the split.
  detail::parallel_for(dim, work, [&](std::size_t i) {
    const auto row_i = table.row(static_cast<int>(i) - n);
    for (std::size_t j = i; j < dim; ++j) {
      r(i, j) = scale2 * dot(row_i, table.row(static_cast<int>(j) - n));
    }
  });
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) r(i, j) = r(j, i);
  }
  return GramMatrix{std::move(r), table.omega(), table.window()};
}

GramMatrix gram(const TimeWindow& window, double omega, int half_order) {
  return gram(SincTable(window, omega, half_order));
}

std::complex<double> spectrum(const BandlimitedModel& model, double omega_eval) {
  double w = omega_eval;
  if (model.band() == Band::high) {
    // (-1)^t modulation shifts the spectrum by pi.
    w = w > 0.0 ? w - kPi : w + kPi;
  }
  const double omega = model.omega();
  if (std::abs(w) > omega) return {0.0, 0.0};
  const int n = model.half_order();
  const auto y = model.coefficients();
  std::complex<double> acc{0.0, 0.0};
  for (int k = -n; k <= n; ++k) {
    acc += y[static_cast<std::size_t>(k + n)] * std::polar(1.0, static_cast<double>(k) * w * kPi / omega);
  }
  return acc;
}

}  // namespace bandcast
