#include "bandcast/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bandcast/error.hpp"

namespace bandcast {

TimeWindow::TimeWindow(TimeIndex q, TimeIndex s) : q_(q), s_(s) {
  if (q > s) {
    throw EmptyWindow("empty window: q=" + std::to_string(q) + " > s=" + std::to_string(s));
  }
}

TimeWindow new_window(TimeIndex q, TimeIndex s) { return TimeWindow(q, s); }

bool is_unique_regime(const TimeWindow& window, int half_order) {
  return window.last() - window.first() >= 2 * static_cast<TimeIndex>(half_order) + 1;
}

Signal::Signal(TimeWindow window, std::vector<double> values)
    : window_(window), values_(std::move(values)) {
  if (values_.size() != window_.sample_count()) {
    throw InvalidArgument("signal has " + std::to_string(values_.size()) + " values but window holds " +
                          std::to_string(window_.sample_count()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("non-finite sample at t=" +
                            std::to_string(window_.first() + static_cast<TimeIndex>(i)));
    }
  }
}

void FitConfig::validate() const {
  if (!(omega > 0.0 && omega < std::numbers::pi)) {
    throw InvalidArgument("omega must lie in (0, pi), got " + std::to_string(omega));
  }
  if (half_order < 0) throw InvalidArgument("half_order must be nonnegative");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be finite and >= 0");
  if (!(solver_tol > 0.0)) throw InvalidArgument("solver_tol must be positive");
  if (solver_max_iter < 0) throw InvalidArgument("solver_max_iter must be positive (or 0 for the default)");
}

BandlimitedModel::BandlimitedModel(double omega, std::vector<double> coefficients, Band band)
    : omega_(omega), coefficients_(std::move(coefficients)), band_(band) {
  if (coefficients_.size() % 2 == 0) {
    throw InvalidArgument("coefficient vector length must be odd (2N+1)");
  }
  if (!(omega_ > 0.0 && omega_ < std::numbers::pi)) {
    throw InvalidArgument("omega must lie in (0, pi)");
  }
  for (double y : coefficients_) {
    if (!std::isfinite(y)) throw InvalidArgument("non-finite model coefficient");
  }
}

}  // namespace bandcast
