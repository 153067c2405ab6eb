// bandcast: band-limited least-squares fitting and forecasting of sampled signals.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bandcast/cli.hpp"

namespace {

using bandcast::TimeIndex;
using namespace bandcast::cli;

struct Flags {
  std::optional<double> omega;
  std::optional<int> half_order;
  std::optional<double> epsilon;
  std::optional<TimeIndex> from;
  std::optional<TimeIndex> to;
  std::optional<int> horizon;
  std::optional<std::string> mode;
  std::optional<int> width;
  std::optional<std::string> input;
  std::optional<std::string> output;
  std::optional<std::string> summary;
  std::optional<std::uint64_t> seed;
  std::optional<double> solver_tol;
  std::optional<int> solver_max_iter;
  std::vector<std::string> sinusoids;
  std::optional<double> noise;
  std::optional<std::string> config;

  ConfigLayer layer() const {
    ConfigLayer l;
    l.omega = omega;
    l.half_order = half_order;
    l.epsilon = epsilon;
    l.from = from;
    l.to = to;
    l.horizon = horizon;
    if (mode) l.mode = *mode == "sliding" ? bandcast::FilterMode::sliding : bandcast::FilterMode::expanding;
    l.width = width;
    l.input = input;
    l.output = output;
    l.summary = summary;
    l.seed = seed;
    l.solver_tol = solver_tol;
    l.solver_max_iter = solver_max_iter;
    if (!sinusoids.empty()) {
      std::vector<Sinusoid> parsed;
      for (const auto& s : sinusoids) parsed.push_back(parse_sinusoid(s));
      l.sinusoids = std::move(parsed);
    }
    l.noise = noise;
    return l;
  }
};

void add_model_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--omega", f.omega, "Band edge in radians per sample, 0 < omega < pi");
  cmd->add_option("--half-order", f.half_order, "N; the model has 2N+1 coefficients")->check(CLI::NonNegativeNumber);
  cmd->add_option("--epsilon", f.epsilon, "Tikhonov shift added to the Gram diagonal (default 1e-3)");
  cmd->add_option("--solver-tol", f.solver_tol, "Conjugate-gradient relative residual tolerance (default 1e-10)");
  cmd->add_option("--max-iter", f.solver_max_iter, "Conjugate-gradient iteration cap (default 10(2N+1))");
}

void add_window_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--from", f.from, "First time index q");
  cmd->add_option("--to", f.to, "Last time index s");
}

void add_io_flags(CLI::App* cmd, Flags& f, bool input) {
  if (input) cmd->add_option("--input", f.input, "Input CSV with header t,value");
  cmd->add_option("--output", f.output, "Output path (stdout when omitted)");
  cmd->add_option("--config", f.config, "JSON config file; flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band-limited least-squares approximation and forecasting"};
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth", "Generate a sum-of-sinusoids test signal");
  add_window_flags(synth, f);
  add_io_flags(synth, f, false);
  synth->add_option("--sinusoid", f.sinusoids, "amplitude,frequency,phase (repeatable)");
  synth->add_option("--noise", f.noise, "Standard deviation of additive Gaussian noise");
  synth->add_option("--seed", f.seed, "Noise seed");

  auto* fit_cmd = app.add_subcommand("fit", "Fit a window and forecast beyond it");
  add_model_flags(fit_cmd, f);
  add_window_flags(fit_cmd, f);
  add_io_flags(fit_cmd, f, true);
  fit_cmd->add_option("--horizon", f.horizon, "Forecast steps (default 2N+1)");
  fit_cmd->add_option("--summary", f.summary, "Write the JSON summary here");

  auto* filter = app.add_subcommand("filter", "Run the causal re-fitting filter over a signal");
  add_model_flags(filter, f);
  add_window_flags(filter, f);
  add_io_flags(filter, f, true);
  filter->add_option("--horizon", f.horizon, "Forecast steps per output row (default 2N+1)");
  filter->add_option("--mode", f.mode, "expanding or sliding")->check(CLI::IsMember({"expanding", "sliding"}));
  filter->add_option("--width", f.width, "Sliding window width");

  auto* eigs = app.add_subcommand("eigs", "Spectrum diagnostics of the Gram matrix");
  add_model_flags(eigs, f);
  add_window_flags(eigs, f);
  add_io_flags(eigs, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kInputError;
  }

  try {
    ConfigLayer layer;
    if (f.config) layer = load_config_file(*f.config);
    layer = overlay(layer, f.layer());

    if (synth->parsed()) {
      cmd_synth(resolve(layer, false), std::cout);
    } else if (fit_cmd->parsed()) {
      const RunConfig rc = resolve(layer);
      const auto summary = cmd_fit(rc, std::cout);
      if (rc.summary.empty() && !rc.output.empty()) std::cout << summary.dump(2) << '\n';
    } else if (filter->parsed()) {
      cmd_filter(resolve(layer), std::cout);
    } else if (eigs->parsed()) {
      const RunConfig rc = resolve(layer);
      const auto report = cmd_eigs(rc);
      if (rc.output.empty()) {
        std::cout << report.dump(2) << '\n';
      } else {
        std::ofstream out(rc.output);
        if (!out || !(out << report.dump(2) << '\n')) throw IoError("cannot write '" + rc.output + "'");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "bandcast: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kSuccess;
}
