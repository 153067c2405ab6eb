#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "bandcast/approximator.hpp"

namespace bandcast {

enum class FilterMode {
  expanding,  // q fixed at the first sample, s advances
  sliding,    // the last `width` samples
};

struct FilterOutput {
  TimeIndex t_now = 0;
  double smoothed_now = 0.0;  // x_hat(t_now)
  Vector forecasts;           // x_hat(t_now + 1), ..., x_hat(t_now + horizon)
  bool unique_regime = false;
  double residual_l2 = 0.0;
  BandlimitedModel model = BandlimitedModel::zero(0.5, 0);
  /// Model time tau corresponds to absolute time tau + frame_offset.
  TimeIndex frame_offset = 0;
};

/// Causal smoothing filter that re-fits on every arrival.
///
/// Expanding mode fits in absolute time. Sliding mode fits in a frame that moves
/// with the buffer: the newest sample always sits at local time (width - 1) / 2,
/// so identical sample runs produce identical coefficients wherever they occur.
class FilterState {
 public:
  FilterState(FilterMode mode, FitConfig config, int horizon, int width = 0);

  FilterMode mode() const noexcept { return mode_; }
  const FitConfig& config() const noexcept { return config_; }
  int horizon() const noexcept { return horizon_; }
  int width() const noexcept { return width_; }

  /// Time of the oldest buffered sample, if any.
  std::optional<TimeIndex> buffer_start() const noexcept;
  const std::deque<double>& buffer() const noexcept { return buffer_; }

  /// Appends x(t) and re-fits. t must follow the previous sample by exactly one.
  FilterOutput push(TimeIndex t, double value);

 private:
  FilterMode mode_;
  FitConfig config_;
  int horizon_;
  int width_;
  std::optional<TimeIndex> last_t_;
  std::deque<double> buffer_;
};

FilterOutput push(FilterState& state, TimeIndex t, double value);

/// Replays the signal through a copy of `state_template`, one output per sample.
std::vector<FilterOutput> run_offline(const Signal& signal, const FilterState& state_template);

}  // namespace bandcast
