#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace mormor::cli {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

struct Field {
  std::string key;
  std::function<void(const json&, ExperimentConfig&)> set;  // throws std::invalid_argument
  std::function<json(const ExperimentConfig&)> get;
};

template <class T>
Field field(std::string key, T ExperimentConfig::*member) {
  auto set = [key, member](const json& value, ExperimentConfig& config) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw std::invalid_argument("'" + key + "' must be true or false");
      config.*member = value.get<bool>();
    } else if constexpr (std::is_same_v<T, int>) {
      if (!value.is_number_integer()) throw std::invalid_argument("'" + key + "' must be an integer");
      config.*member = value.get<int>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!value.is_number()) throw std::invalid_argument("'" + key + "' must be a number");
      config.*member = value.get<double>();
    } else {
      if (!value.is_string()) throw std::invalid_argument("'" + key + "' must be a string");
      config.*member = value.get<std::string>();
    }
  };
  auto get = [member](const ExperimentConfig& config) { return json(config.*member); };
  return {std::move(key), set, get};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field("kind", &ExperimentConfig::kind),
      field("mesh", &ExperimentConfig::mesh),
      field("tau", &ExperimentConfig::tau),
      field("params", &ExperimentConfig::params),
      field("selection", &ExperimentConfig::selection),
      field("tolerance", &ExperimentConfig::tolerance),
      field("alpha", &ExperimentConfig::alpha),
      field("lambda", &ExperimentConfig::lambda),
      field("dimension", &ExperimentConfig::dimension),
      field("steps", &ExperimentConfig::steps),
      field("levels", &ExperimentConfig::levels),
      field("sigma", &ExperimentConfig::sigma),
      field("param_side", &ExperimentConfig::param_side),
      field("n", &ExperimentConfig::n),
      field("m", &ExperimentConfig::m),
      field("seed", &ExperimentConfig::seed),
      field("out", &ExperimentConfig::out),
      field("threads", &ExperimentConfig::threads),
      field("timings", &ExperimentConfig::timings),
      field("width_proxy", &ExperimentConfig::width_proxy),
  };
  return table;
}

void check(bool condition, const std::string& key, const std::string& message) {
  if (!condition) throw ConfigError::for_key(key, message);
}

}  // namespace

int line_of_key(const std::string& text, const std::string& key) {
  const auto at = text.find('"' + key + '"');
  return at == std::string::npos ? 0 : line_of_offset(text, at);
}

ConfigError ConfigError::for_key(std::string key, const std::string& message) {
  ConfigError error(message);
  error.key_ = std::move(key);
  return error;
}

ConfigError ConfigError::located(std::string source, int line) const {
  ConfigError error(what(), std::move(source), line);
  error.key_ = key_;
  return error;
}

ConfigError::ConfigError(const std::string& message, std::string source, int line)
    : std::runtime_error(message), source_(std::move(source)), line_(line) {}

std::string ConfigError::diagnostic() const {
  std::string out;
  if (!source_.empty()) out += source_ + ':';
  if (line_ > 0) out += std::to_string(line_) + ':';
  if (!out.empty()) out += ' ';
  return out + what();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              ExperimentConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string message = e.what();
    if (const auto cut = message.find("syntax error"); cut != std::string::npos)
      message = message.substr(cut);
    throw ConfigError(message, source, line_of_offset(text, at));
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object", source, 1);

  for (const auto& [key, value] : doc.items()) {
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == table.end())
      throw ConfigError("unknown key '" + key + "'", source, line_of_key(text, key));
    try {
      it->set(value, base);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), source, line_of_key(text, key));
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file", path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string(), std::move(base));
}

void validate(const ExperimentConfig& c) {
  static const std::vector<std::string> kinds = {"pod-greedy", "eim-pod-greedy", "eim-classical",
                                                 "sequence-rate"};
  check(!c.kind.empty(), "kind", "experiment kind is missing");
  check(std::find(kinds.begin(), kinds.end(), c.kind) != kinds.end(), "kind",
        "unknown experiment kind '" + c.kind +
            "' (expected pod-greedy, eim-pod-greedy, eim-classical or sequence-rate)");
  check(c.n >= 1, "n", "n must be at least 1");
  check(c.m >= 1, "m", "m must be at least 1");
  check(c.threads >= 0, "threads", "threads must be non-negative");
  check(!c.out.empty(), "out", "out must not be empty");

  if (c.kind == "pod-greedy") {
    check(c.mesh >= 3 && c.mesh % 2 == 1, "mesh", "mesh must be odd and at least 3");
    check(c.tau >= 0 && c.tau <= 20, "tau", "tau must lie in 0..20 (time step 2^-tau)");
    check(c.params >= 1, "params", "params must be at least 1");
    check(c.selection == "exact-error" || c.selection == "estimator", "selection",
          "selection must be exact-error or estimator");
    check(c.tolerance >= 0.0, "tolerance", "tolerance must be non-negative");
    const long long nodes = (1LL << c.tau) + 1;
    const long long dofs = static_cast<long long>(c.mesh - 2) * (c.mesh - 2);
    check(c.m <= nodes, "m", "m exceeds the number of time nodes");
    check(static_cast<long long>(c.n) * c.m <= std::min(dofs, nodes * c.params), "n",
          "n * m exceeds the available snapshots");
  } else if (c.kind == "sequence-rate") {
    check(c.alpha > 0.0, "alpha", "alpha must be positive");
    check(c.lambda > 0.0, "lambda", "lambda must be positive");
    check(c.steps >= 1, "steps", "steps must be at least 1");
    check(c.m <= c.steps + 1, "m", "m exceeds the number of time nodes");
    check(c.dimension == 0 || c.dimension >= c.n, "dimension", "dimension must be at least n");
  } else {
    check(c.levels >= 2, "levels", "levels must be at least 2");
    check(c.sigma >= 2, "sigma", "sigma must be at least 2");
    check(c.param_side >= 1, "param_side", "param_side must be at least 1");
    if (c.kind == "eim-pod-greedy") {
      check(c.m <= c.levels, "m", "m exceeds the number of time levels");
      check(static_cast<long long>(c.n) * c.m <= c.sigma, "n", "n * m exceeds the number of points");
    } else {
      check(c.m == 1, "m", "eim-classical adds one point per iteration (m must be 1)");
      check(static_cast<long long>(c.n) <= static_cast<long long>(c.sigma) * c.levels, "n",
            "n exceeds the number of space-time points");
    }
  }
}

std::string config_json(const ExperimentConfig& config) {
  json doc = json::object();
  for (const auto& f : fields()) doc[f.key] = f.get(config);
  return doc.dump(2) + '\n';
}

}  // namespace mormor::cli
