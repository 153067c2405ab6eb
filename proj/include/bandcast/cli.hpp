#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bandcast/error.hpp"
#include "bandcast/streaming_filter.hpp"

namespace bandcast::cli {

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input CSV times are not consecutive integers.
class GapError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kSolverFailure = 3,
  kIoFailure = 4,
};

/// Maps an exception raised by a command onto the process exit code.
int exit_code_for(const std::exception& e) noexcept;

// ---- CSV ---------------------------------------------------------------------

/// 17 significant digits; parses back to the identical double.
std::string format_double(double v);

/// Reads `t,value` rows. Times must be consecutive integers.
Signal read_signal_csv(std::istream& in);
Signal read_signal_csv(const std::string& path);
void write_signal_csv(std::ostream& out, const Signal& signal);

/// Restricts a signal to [from, to]; both bounds default to the signal's own.
Signal select_window(const Signal& signal, std::optional<TimeIndex> from, std::optional<TimeIndex> to);

// ---- configuration -----------------------------------------------------------

struct Sinusoid {
  double amplitude = 1.0;
  double frequency = 0.0;  // radians per sample
  double phase = 0.0;
};

/// Parses "amplitude,frequency,phase".
Sinusoid parse_sinusoid(const std::string& text);

/// x(t) = sum_j a_j cos(f_j t + phi_j) + noise * N(0, 1), seeded.
struct SynthSpec {
  std::vector<Sinusoid> sinusoids;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

/// One configuration source. Unset fields defer to lower-precedence layers.
struct ConfigLayer {
  std::optional<double> omega;
  std::optional<int> half_order;
  std::optional<double> epsilon;
  std::optional<TimeIndex> from;
  std::optional<TimeIndex> to;
  std::optional<int> horizon;
  std::optional<FilterMode> mode;
  std::optional<int> width;
  std::optional<std::string> input;
  std::optional<std::string> output;
  std::optional<std::string> summary;
  std::optional<std::uint64_t> seed;
  std::optional<double> solver_tol;
  std::optional<int> solver_max_iter;
  std::optional<std::vector<Sinusoid>> sinusoids;
  std::optional<double> noise;
};

/// Reads a JSON config object; keys mirror the long flag names with '_' for '-'.
ConfigLayer layer_from_json(const nlohmann::json& j);
ConfigLayer load_config_file(const std::string& path);

/// Fields set in `top` override those in `base`.
ConfigLayer overlay(ConfigLayer base, const ConfigLayer& top);

struct RunConfig {
  FitConfig fit;
  std::optional<TimeIndex> from;
  std::optional<TimeIndex> to;
  int horizon = 1;
  FilterMode mode = FilterMode::expanding;
  int width = 0;
  std::string input;
  std::string output;
  std::string summary;
  SynthSpec synth;
};

/// Applies defaults (epsilon 1e-3, horizon 2N+1) and validates. Omega and the half
/// order are mandatory when `needs_model` is set.
RunConfig resolve(const ConfigLayer& layer, bool needs_model = true);

// ---- commands ----------------------------------------------------------------

Signal synthesize_signal(const SynthSpec& spec, const TimeWindow& window);

/// Writes `t,value` for the configured window to `output` (stdout when empty).
void cmd_synth(const RunConfig& config, std::ostream& fallback);

/// Writes `t,x,xhat,is_forecast` rows to `output` and returns the summary, which is
/// also written to `summary` when that path is set.
nlohmann::json cmd_fit(const RunConfig& config, std::ostream& fallback);

/// One row per pushed sample: `t,x,smoothed,forecast_1..forecast_h,unique_regime`.
void cmd_filter(const RunConfig& config, std::ostream& fallback);

/// Spectrum diagnostics of R and R + eps I for the configured window.
nlohmann::json cmd_eigs(const RunConfig& config);

inline constexpr std::size_t kFullSpectrumLimit = 512;

}  // namespace bandcast::cli
