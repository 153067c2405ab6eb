#include "bandcast/streaming_filter.hpp"

#include <cmath>
#include <string>

#include "bandcast/error.hpp"

namespace bandcast {

FilterState::FilterState(FilterMode mode, FitConfig config, int horizon, int width)
    : mode_(mode), config_(config), horizon_(horizon), width_(width) {
  config_.validate();
  if (horizon_ < 1) throw InvalidArgument("filter horizon must be >= 1");
  if (mode_ == FilterMode::sliding && width_ < 1) throw InvalidArgument("sliding mode needs width >= 1");
}

std::optional<TimeIndex> FilterState::buffer_start() const noexcept {
  if (!last_t_) return std::nullopt;
  return *last_t_ - static_cast<TimeIndex>(buffer_.size()) + 1;
}

FilterOutput FilterState::push(TimeIndex t, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite sample at t=" + std::to_string(t));
  if (last_t_ && t != *last_t_ + 1) {
    throw NonConsecutiveTime("expected t=" + std::to_string(*last_t_ + 1) + ", got t=" + std::to_string(t));
  }

  const auto saved_last = last_t_;
  std::optional<double> evicted;
  buffer_.push_back(value);
  last_t_ = t;
  if (mode_ == FilterMode::sliding && buffer_.size() > static_cast<std::size_t>(width_)) {
    evicted = buffer_.front();
    buffer_.pop_front();
  }

  try {
    const TimeIndex offset = mode_ == FilterMode::sliding ? t - (width_ - 1) / 2 : 0;
    const TimeIndex local_s = t - offset;
    const TimeIndex local_q = local_s - static_cast<TimeIndex>(buffer_.size()) + 1;
    const Signal window_signal(TimeWindow(local_q, local_s), std::vector<double>(buffer_.begin(), buffer_.end()));
    FitResult result = fit(window_signal, config_);

    FilterOutput out;
    out.t_now = t;
    out.smoothed_now = result.fitted_values.back();
    out.forecasts = forecast(result, horizon_);
    out.unique_regime = result.unique_regime;
    out.residual_l2 = result.residual_l2;
    out.model = std::move(result.model);
    out.frame_offset = offset;
    return out;
  } catch (...) {
    buffer_.pop_back();
    if (evicted) buffer_.push_front(*evicted);
    last_t_ = saved_last;
    throw;
  }
}

FilterOutput push(FilterState& state, TimeIndex t, double value) { return state.push(t, value); }

std::vector<FilterOutput> run_offline(const Signal& signal, const FilterState& state_template) {
  FilterState state = state_template;
  std::vector<FilterOutput> outputs;
  outputs.reserve(signal.window().sample_count());
  for (TimeIndex t = signal.window().first(); t <= signal.window().last(); ++t) {
    outputs.push_back(state.push(t, signal.at(t)));
  }
  return outputs;
}

}  // namespace bandcast
