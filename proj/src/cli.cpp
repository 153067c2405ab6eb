#include "bandcast/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "bandcast/sinc_ops.hpp"
#include "bandcast/solver.hpp"

namespace bandcast::cli {

namespace {

using nlohmann::json;

// Power-iteration budget for eigs: ~5e7 multiply-adds, at least 2000 sweeps.
int eigs_power_iters(std::size_t n) {
  const double sweeps = 5e7 / static_cast<double>(std::max<std::size_t>(n * n, 1));
  return static_cast<int>(std::clamp(sweeps, 2000.0, 100000.0));
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config key '") + key + "': " + e.what());
  }
}

FilterMode parse_mode(const std::string& text) {
  if (text == "expanding") return FilterMode::expanding;
  if (text == "sliding") return FilterMode::sliding;
  throw ParseError("mode must be 'expanding' or 'sliding', got '" + text + "'");
}

void write_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    fallback.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output '" + path + "'");
  body(out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

json window_json(const TimeWindow& w) {
  return {{"q", w.first()}, {"s", w.last()}, {"sample_count", w.sample_count()}};
}

Signal load_input(const RunConfig& config) {
  if (config.input.empty()) throw InvalidArgument("--input is required");
  return select_window(read_signal_csv(config.input), config.from, config.to);
}

json spectrum_json(const Matrix& m) {
  const EigenBounds bounds = condition_estimate(m, eigs_power_iters(m.rows()));
  json out{{"lambda_max_estimate", bounds.lambda_max},
           {"lambda_min_estimate", bounds.lambda_min},
           {"condition_estimate", condition_number(bounds)}};
  if (m.rows() <= kFullSpectrumLimit) {
    const Vector ev = symmetric_eigenvalues(m);
    out["eigenvalues"] = ev;
    out["min_max_ratio"] = ev.front() / ev.back();
  } else {
    out["eigenvalues"] = json::array();
    out["min_max_ratio"] = bounds.lambda_min / bounds.lambda_max;
  }
  return out;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const IoError*>(&e)) return kIoFailure;
  if (dynamic_cast<const NotPositiveDefinite*>(&e) || dynamic_cast<const SingularSystem*>(&e)) {
    return kSolverFailure;
  }
  return kInputError;
}

Sinusoid parse_sinusoid(const std::string& text) {
  std::stringstream ss(text);
  std::string field;
  std::vector<double> parts;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw ParseError("sinusoid '" + text + "': cannot parse '" + field + "'");
    }
  }
  if (parts.size() != 3) throw ParseError("sinusoid '" + text + "' must be amplitude,frequency,phase");
  return {parts[0], parts[1], parts[2]};
}

ConfigLayer layer_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "omega", "half_order", "epsilon", "from",   "to",   "horizon",         "mode",      "width", "input",
      "output", "summary",   "seed",    "solver_tol", "solver_max_iter", "sinusoids", "noise"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError("unknown config key '" + key + "'");
    }
  }
  ConfigLayer layer;
  layer.omega = get_optional<double>(j, "omega");
  layer.half_order = get_optional<int>(j, "half_order");
  layer.epsilon = get_optional<double>(j, "epsilon");
  layer.from = get_optional<TimeIndex>(j, "from");
  layer.to = get_optional<TimeIndex>(j, "to");
  layer.horizon = get_optional<int>(j, "horizon");
  if (auto mode = get_optional<std::string>(j, "mode")) layer.mode = parse_mode(*mode);
  layer.width = get_optional<int>(j, "width");
  layer.input = get_optional<std::string>(j, "input");
  layer.output = get_optional<std::string>(j, "output");
  layer.summary = get_optional<std::string>(j, "summary");
  layer.seed = get_optional<std::uint64_t>(j, "seed");
  layer.solver_tol = get_optional<double>(j, "solver_tol");
  layer.solver_max_iter = get_optional<int>(j, "solver_max_iter");
  layer.noise = get_optional<double>(j, "noise");
  if (j.contains("sinusoids")) {
    const json& list = j.at("sinusoids");
    if (!list.is_array()) throw ParseError("config key 'sinusoids' must be an array");
    std::vector<Sinusoid> sinusoids;
    for (const json& item : list) {
      if (item.is_string()) {
        sinusoids.push_back(parse_sinusoid(item.get<std::string>()));
      } else if (item.is_object()) {
        sinusoids.push_back({get_optional<double>(item, "amplitude").value_or(1.0),
                             get_optional<double>(item, "frequency").value_or(0.0),
                             get_optional<double>(item, "phase").value_or(0.0)});
      } else {
        throw ParseError("sinusoid entries must be objects or 'a,f,phi' strings");
      }
    }
    layer.sinusoids = std::move(sinusoids);
  }
  return layer;
}

ConfigLayer load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  try {
    return layer_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
}

ConfigLayer overlay(ConfigLayer base, const ConfigLayer& top) {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.omega, top.omega);
  take(base.half_order, top.half_order);
  take(base.epsilon, top.epsilon);
  take(base.from, top.from);
  take(base.to, top.to);
  take(base.horizon, top.horizon);
  take(base.mode, top.mode);
  take(base.width, top.width);
  take(base.input, top.input);
  take(base.output, top.output);
  take(base.summary, top.summary);
  take(base.seed, top.seed);
  take(base.solver_tol, top.solver_tol);
  take(base.solver_max_iter, top.solver_max_iter);
  take(base.sinusoids, top.sinusoids);
  take(base.noise, top.noise);
  return base;
}

RunConfig resolve(const ConfigLayer& layer, bool needs_model) {
  RunConfig rc;
  if (needs_model) {
    if (!layer.omega) throw InvalidArgument("--omega is required");
    if (!layer.half_order) throw InvalidArgument("--half-order is required");
  }
  rc.fit.omega = layer.omega.value_or(0.0);
  rc.fit.half_order = layer.half_order.value_or(0);
  rc.fit.epsilon = layer.epsilon.value_or(1e-3);
  rc.fit.solver_tol = layer.solver_tol.value_or(1e-10);
  rc.fit.solver_max_iter = layer.solver_max_iter.value_or(0);
  if (needs_model) rc.fit.validate();

  rc.from = layer.from;
  rc.to = layer.to;
  rc.horizon = layer.horizon.value_or(2 * rc.fit.half_order + 1);
  if (rc.horizon < 1) throw InvalidArgument("--horizon must be >= 1");
  rc.mode = layer.mode.value_or(FilterMode::expanding);
  rc.width = layer.width.value_or(0);
  if (rc.mode == FilterMode::sliding && rc.width < 1) throw InvalidArgument("--mode sliding needs --width >= 1");
  rc.input = layer.input.value_or("");
  rc.output = layer.output.value_or("");
  rc.summary = layer.summary.value_or("");

  const std::vector<const std::string*> paths = {&rc.input, &rc.output, &rc.summary};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (!paths[i]->empty() && *paths[i] == *paths[j]) {
        throw InvalidArgument("input, output and summary paths must differ ('" + *paths[i] + "')");
      }
    }
  }

  rc.synth.sinusoids = layer.sinusoids.value_or(std::vector<Sinusoid>{});
  rc.synth.noise = layer.noise.value_or(0.0);
  rc.synth.seed = layer.seed.value_or(0);
  if (!(rc.synth.noise >= 0.0)) throw InvalidArgument("--noise must be >= 0");
  return rc;
}

Signal synthesize_signal(const SynthSpec& spec, const TimeWindow& window) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> values(window.sample_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = static_cast<double>(window.first() + static_cast<TimeIndex>(i));
    double x = 0.0;
    for (const Sinusoid& s : spec.sinusoids) x += s.amplitude * std::cos(s.frequency * t + s.phase);
    if (spec.noise > 0.0) x += spec.noise * gauss(rng);
    values[i] = x;
  }
  return Signal(window, std::move(values));
}

void cmd_synth(const RunConfig& config, std::ostream& fallback) {
  if (!config.from || !config.to) throw InvalidArgument("synth needs --from and --to");
  const Signal signal = synthesize_signal(config.synth, TimeWindow(*config.from, *config.to));
  write_to(config.output, fallback, [&](std::ostream& out) { write_signal_csv(out, signal); });
}

json cmd_fit(const RunConfig& config, std::ostream& fallback) {
  const Signal signal = load_input(config);
  const auto start = std::chrono::steady_clock::now();
  const FitResult result = fit(signal, config.fit);
  const Vector ahead = forecast(result, config.horizon);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_to(config.output, fallback, [&](std::ostream& out) {
    out << "t,x,xhat,is_forecast\n";
    const TimeWindow& w = signal.window();
    for (TimeIndex t = w.first(); t <= w.last(); ++t) {
      out << t << ',' << format_double(signal.at(t)) << ','
          << format_double(result.fitted_values[static_cast<std::size_t>(t - w.first())]) << ",0\n";
    }
    for (std::size_t h = 0; h < ahead.size(); ++h) {
      out << w.last() + static_cast<TimeIndex>(h) + 1 << ",," << format_double(ahead[h]) << ",1\n";
    }
  });

  const SolverInfo& info = result.solver_info;
  json summary{{"command", "fit"},
               {"omega", config.fit.omega},
               {"half_order", config.fit.half_order},
               {"epsilon", config.fit.epsilon},
               {"window", window_json(signal.window())},
               {"horizon", config.horizon},
               {"unique_regime", result.unique_regime},
               {"residual_l2", result.residual_l2},
               {"normal_residual", result.normal_residual},
               {"coefficient_norm", norm2(result.model.coefficients())},
               {"solver",
                {{"method", to_string(info.method)},
                 {"iterations", info.iterations},
                 {"achieved_residual", info.achieved_residual},
                 {"condition_estimate", info.condition_estimate},
                 {"lambda_max_estimate", info.lambda_max_estimate},
                 {"lambda_min_estimate", info.lambda_min_estimate},
                 {"note", info.note}}},
               {"elapsed_seconds", elapsed}};
  if (!config.summary.empty()) {
    write_to(config.summary, fallback, [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
  }
  return summary;
}

void cmd_filter(const RunConfig& config, std::ostream& fallback) {
  const Signal signal = load_input(config);
  const FilterState state(config.mode, config.fit, config.horizon, config.width);
  const std::vector<FilterOutput> outputs = run_offline(signal, state);

  write_to(config.output, fallback, [&](std::ostream& out) {
    out << "t,x,smoothed";
    for (int h = 1; h <= config.horizon; ++h) out << ",forecast_" << h;
    out << ",unique_regime\n";
    for (const FilterOutput& o : outputs) {
      out << o.t_now << ',' << format_double(signal.at(o.t_now)) << ',' << format_double(o.smoothed_now);
      for (double f : o.forecasts) out << ',' << format_double(f);
      out << ',' << (o.unique_regime ? 1 : 0) << '\n';
    }
  });
}

json cmd_eigs(const RunConfig& config) {
  if (!config.from || !config.to) throw InvalidArgument("eigs needs --from and --to");
  const TimeWindow window(*config.from, *config.to);
  const GramMatrix r = gram(window, config.fit.omega, config.fit.half_order);
  return json{{"command", "eigs"},
              {"omega", config.fit.omega},
              {"half_order", config.fit.half_order},
              {"epsilon", config.fit.epsilon},
              {"window", window_json(window)},
              {"dimension", r.entries.rows()},
              {"unique_regime", is_unique_regime(window, config.fit.half_order)},
              {"gram", spectrum_json(r.entries)},
              {"regularized", spectrum_json(regularize(r, config.fit.epsilon))}};
}

}  // namespace bandcast::cli
