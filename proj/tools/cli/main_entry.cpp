#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "mormor/errors.hpp"

namespace mormor::cli {

namespace {

struct Overrides {
  std::vector<std::pair<std::string, CLI::Option*>> options;
  ExperimentConfig values;

  void apply(ExperimentConfig& config) const {
    for (const auto& [key, option] : options) {
      if (option->count() == 0) continue;
      if (key == "mesh") config.mesh = values.mesh;
      else if (key == "tau") config.tau = values.tau;
      else if (key == "params") config.params = values.params;
      else if (key == "selection") config.selection = values.selection;
      else if (key == "tolerance") config.tolerance = values.tolerance;
      else if (key == "alpha") config.alpha = values.alpha;
      else if (key == "lambda") config.lambda = values.lambda;
      else if (key == "dimension") config.dimension = values.dimension;
      else if (key == "steps") config.steps = values.steps;
      else if (key == "levels") config.levels = values.levels;
      else if (key == "sigma") config.sigma = values.sigma;
      else if (key == "param_side") config.param_side = values.param_side;
      else if (key == "n") config.n = values.n;
      else if (key == "m") config.m = values.m;
      else if (key == "seed") config.seed = values.seed;
      else if (key == "out") config.out = values.out;
      else if (key == "threads") config.threads = values.threads;
      else if (key == "timings") config.timings = true;
      else if (key == "width_proxy") config.width_proxy = true;
    }
  }

  bool overrides(const std::string& key) const {
    return std::any_of(options.begin(), options.end(), [&](const auto& entry) {
      return entry.first == key && entry.second->count() > 0;
    });
  }
};

template <class T>
void add(CLI::App& app, Overrides& o, const std::string& key, T& slot, const std::string& help) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  o.options.emplace_back(key, app.add_option(flag, slot, help));
}

std::vector<std::string> reversed_args(int argc, const char* const* argv, int skip) {
  std::vector<std::string> args;
  for (int i = argc - 1; i >= skip; --i) args.emplace_back(argv[i]);
  return args;
}

int run_compare(int argc, const char* const* argv, int first, std::ostream& out, std::ostream& err) {
  CLI::App app{"Align the error curves of two completed runs", "mormor compare"};
  std::string dir_a, dir_b, output;
  app.add_option("run_a", dir_a, "first run directory")->required();
  app.add_option("run_b", dir_b, "second run directory")->required();
  app.add_option("--out", output, "output CSV (default: stdout)");
  auto args = reversed_args(argc, argv, first);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "mormor compare: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const RunCurve a = read_curve(dir_a);
    const RunCurve b = read_curve(dir_b);
    if (output.empty()) {
      write_comparison(out, a, b);
    } else {
      std::ofstream file(output, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file", output);
      write_comparison(file, a, b);
    }
  } catch (const ConfigError& e) {
    err << "mormor compare: " << e.diagnostic() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "mormor compare: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  int first = 1;
  if (first < argc && std::string(argv[first]) == "run") ++first;
  if (first < argc && std::string(argv[first]) == "compare")
    return run_compare(argc, argv, first + 1, out, err);

  CLI::App app{"Reduced-basis experiments: POD-Greedy, EIM-POD-Greedy and rate checks", "mormor"};
  app.footer("Kinds: pod-greedy, eim-pod-greedy, eim-classical, sequence-rate.\n"
             "Also: mormor compare <run_a> <run_b> [--out file].\n"
             "Exit codes: 0 success, 2 configuration error, 3 solver failure.");
  std::string kind, config_path;
  app.add_option("kind", kind, "experiment kind");
  app.add_option("--config", config_path, "JSON config; flags override its fields");

  Overrides o;
  ExperimentConfig& v = o.values;
  add(app, o, "mesh", v.mesh, "vertices per side of the mesh (odd)");
  add(app, o, "tau", v.tau, "time step 2^-tau");
  add(app, o, "params", v.params, "number of training parameters in [1, 2]");
  add(app, o, "selection", v.selection, "exact-error or estimator");
  add(app, o, "tolerance", v.tolerance, "early-stop threshold");
  add(app, o, "alpha", v.alpha, "sequence decay exponent");
  add(app, o, "lambda", v.lambda, "sequence time-decay rate");
  add(app, o, "dimension", v.dimension, "sequence truncation dimension (0: 2n)");
  add(app, o, "steps", v.steps, "sequence model time steps on [0, 1]");
  add(app, o, "levels", v.levels, "time levels of the function family");
  add(app, o, "sigma", v.sigma, "candidate points in (0, 1)");
  add(app, o, "param_side", v.param_side, "parameters per axis of the family grid");
  add(app, o, "n", v.n, "iterations");
  add(app, o, "m", v.m, "POD modes per iteration");
  add(app, o, "seed", v.seed, "reserved; experiments are deterministic");
  add(app, o, "out", v.out, "output directory");
  add(app, o, "threads", v.threads, "worker threads (0: MORMOR_THREADS or all cores)");
  o.options.emplace_back("timings", app.add_flag("--timings", "write wall times to report.csv"));
  o.options.emplace_back("width_proxy",
                         app.add_flag("--width-proxy", "write snapshot singular values"));

  auto args = reversed_args(argc, argv, first);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "mormor: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string config_text;
  ExperimentConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file", config_path);
      std::ostringstream text;
      text << in.rdbuf();
      config_text = text.str();
      config = parse_config(config_text, config_path);
    }
    if (!kind.empty()) {
      if (!config.kind.empty() && config.kind != kind)
        throw ConfigError("kind '" + config.kind + "' in the config conflicts with '" + kind + "'",
                          config_path, line_of_key(config_text, "kind"));
      config.kind = kind;
    }
    o.apply(config);
    try {
      validate(config);
    } catch (const ConfigError& e) {
      if (e.key().empty()) throw;
      if (o.overrides(e.key()) || config_path.empty() || line_of_key(config_text, e.key()) == 0) {
        std::string flag = "--" + e.key();
        std::replace(flag.begin(), flag.end(), '_', '-');
        throw e.located(e.key() == "kind" ? "command line" : flag, 0);
      }
      throw e.located(config_path, line_of_key(config_text, e.key()));
    }
  } catch (const ConfigError& e) {
    err << "mormor: config error: " << e.diagnostic() << '\n';
    return kExitConfig;
  }

  try {
    run_experiment(config, out);
  } catch (const SolverError& e) {
    err << "mormor: solver failure: " << e.what();
    if (e.parameter()) err << " (mu = " << *e.parameter() << ')';
    err << '\n';
    return kExitSolver;
  } catch (const ConfigError& e) {
    err << "mormor: config error: " << e.diagnostic() << '\n';
    return kExitConfig;
  } catch (const ContractViolation& e) {
    err << "mormor: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "mormor: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}

}  // namespace mormor::cli
