#pragma once

// Experiment runner behind the `mormor` executable.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mormor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

/// Invalid configuration. `line` is 1-based within `source`, 0 if unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string source = {}, int line = 0);

  /// An error about one config key, located later by the caller.
  static ConfigError for_key(std::string key, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& key() const { return key_; }
  ConfigError located(std::string source, int line) const;
  /// "source:line: message", omitting what is unknown.
  std::string diagnostic() const;

 private:
  std::string source_;
  int line_;
  std::string key_;
};

/// 1-based line of the first occurrence of "key" in a JSON text, 0 if absent.
int line_of_key(const std::string& text, const std::string& key);

struct ExperimentConfig {
  std::string kind;  // pod-greedy | eim-pod-greedy | eim-classical | sequence-rate

  // diffusion model
  int mesh = 65;        // vertices per side
  int tau = 7;          // time step 2^-tau
  int params = 20;      // training parameters in [1, 2]
  std::string selection = "exact-error";
  double tolerance = 0.0;

  // sequence model
  double alpha = 1.0;
  double lambda = 1.0;
  int dimension = 0;  // 0: 2 * n
  int steps = 32;     // time steps on [0, 1]

  // function family
  int levels = 128;
  int sigma = 100;
  int param_side = 10;

  int n = 20;
  int m = 1;
  int seed = 0;
  std::string out = "out";
  int threads = 0;
  bool timings = false;
  bool width_proxy = false;
};

/// Keys a JSON config may set.
const std::vector<std::string>& config_keys();

/// Parses a JSON object into `base`. Unknown keys, wrong types and syntax
/// errors raise ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Kind-specific checks. Throws ConfigError.
void validate(const ExperimentConfig& config);

std::string config_json(const ExperimentConfig& config);

/// Runs one experiment and writes report.csv, report.json, convergence.svg,
/// summary.txt and config.json into config.out. Progress goes to `log`.
void run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Error after each iteration, read back from a run directory.
struct RunCurve {
  std::string kind;
  std::string label;
  std::vector<int> n;
  std::vector<int> dimension;  // N: basis or interpolant size after iteration n
  std::vector<double> error;
};

RunCurve read_curve(const std::filesystem::path& run_dir);

/// Aligned CSV `axis,x,<a>,<b>` with one block keyed by n and one by N.
/// Throws ConfigError when the two runs are of incompatible kinds.
void write_comparison(std::ostream& out, const RunCurve& a, const RunCurve& b);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line chart with a logarithmic y axis. Non-positive values are skipped.
void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<Series>& series);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);
/// Slope of log(y) against log(x) over points with lo <= x <= hi.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo,
                    double hi);

/// Full command line: `[run] <kind> [flags]` or `compare <dirA> <dirB> --out <file>`.
/// Returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mormor::cli
