#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "mormor/eim.hpp"
#include "mormor/greedy.hpp"
#include "mormor/models.hpp"

namespace mormor::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string sci(double v, int digits = 4) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream s;
  s << std::scientific << std::setprecision(digits) << v;
  return s.str();
}

std::string fix(double v, int digits = 4) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Error against the space built after iteration n (1-based).
std::vector<double> errors_after(const std::vector<double>& per_row, double final_value) {
  std::vector<double> out;
  for (std::size_t i = 1; i < per_row.size(); ++i) out.push_back(per_row[i]);
  if (!per_row.empty()) out.push_back(final_value);
  return out;
}

bool is_greedy_kind(const std::string& kind) {
  return kind == "pod-greedy" || kind == "sequence-rate";
}

void write_widths(const fs::path& dir, const std::vector<double>& widths, std::ostream& summary) {
  auto out = open_output(dir / "widths.csv");
  out << "k,singular_value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < widths.size(); ++k) out << k + 1 << ',' << widths[k] << '\n';
  summary << "width proxy (leading singular values):";
  for (std::size_t k = 0; k < std::min<std::size_t>(widths.size(), 10); ++k)
    summary << ' ' << sci(widths[k], 3);
  summary << '\n';
}

void write_greedy_outputs(const ExperimentConfig& config, const ParametricModel& model,
                          const GreedyResult& result, std::ostream& summary) {
  const fs::path dir = config.out;
  const GreedyReport& report = result.report;
  {
    auto csv = open_output(dir / "report.csv");
    write_report_csv(csv, report, config.timings);
    auto js = open_output(dir / "report.json");
    write_report_json(js, report);
  }

  std::vector<double> sigma_rows, n_axis, size_axis;
  for (const auto& row : report.rows) {
    sigma_rows.push_back(row.sigma);
    n_axis.push_back(row.n);
    size_axis.push_back(row.basis_size);
  }
  const std::vector<double> after = errors_after(sigma_rows, report.final_sigma);

  std::vector<Series> series;
  if (config.kind == "sequence-rate") {
    series.push_back({"sigma_n", n_axis, sigma_rows});
  } else {
    series.push_back({"E_N", size_axis, after});
    if (report.selection == Selection::Estimator) {
      std::vector<double> before_size, delta, e;
      int previous = 0;
      for (const auto& row : report.rows) {
        before_size.push_back(previous);
        previous = row.basis_size;
        delta.push_back(row.delta_sup);
        e.push_back(row.reduced_error);
      }
      series.push_back({"Delta (selected)", before_size, delta});
      series.push_back({"e (selected)", before_size, e});
    }
  }
  {
    auto svg = open_output(dir / "convergence.svg");
    if (config.kind == "sequence-rate")
      write_svg(svg, "sequence model, alpha = " + fix(config.alpha, 2), "n", "sigma_n", series);
    else
      write_svg(svg, "POD-Greedy, m = " + std::to_string(config.m), "N", "max error", series);
  }

  summary << "model: " << model.name() << '\n';
  summary << "selection: " << to_string(report.selection) << ", modes per iteration: "
          << report.modes << '\n';
  summary << "status: " << report.status << ", iterations: " << report.rows.size()
          << ", basis size: " << result.basis.size() << '\n';
  summary << "final error: " << sci(report.final_sigma) << '\n';

  if (config.kind == "sequence-rate") {
    const double hi = static_cast<double>(report.rows.size());
    const double lo = hi >= 20 ? 10.0 : 1.0;
    const double slope = loglog_slope(n_axis, sigma_rows, lo, hi);
    summary << "fitted slope of log sigma_n vs log n over n in [" << lo << ", " << hi
            << "]: " << fix(slope, 4) << " (expected " << fix(-config.alpha, 4) << ")\n";
  } else if (after.size() >= 2) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < after.size(); ++i) {
      if (!(after[i] > 0.0)) continue;
      xs.push_back(size_axis[i]);
      ys.push_back(std::log(after[i]));
    }
    summary << "fitted exponential rate: E_N ~ exp(" << fix(fit_slope(xs, ys), 4) << " N)\n";
  }

  summary << "\n  n        mu      sigma_n    delta_sup      theta  gamma_eff   Delta/e\n";
  for (const auto& row : report.rows) {
    const double eff = row.delta_sup / row.reduced_error;
    summary << std::setw(3) << row.n << ' ' << std::setw(9) << fix(row.mu, 4) << ' '
            << std::setw(11) << sci(row.sigma, 3) << ' ' << std::setw(12) << sci(row.delta_sup, 3)
            << ' ' << std::setw(10) << fix(row.theta, 4) << ' ' << std::setw(10)
            << fix(row.gamma_eff, 4) << ' ' << std::setw(9) << fix(eff, 3) << '\n';
  }
  for (const auto& w : report.warnings) summary << "warning: " << w << '\n';
}

void run_greedy(const ExperimentConfig& config, std::ostream& log, std::ostream& summary) {
  std::unique_ptr<ParametricModel> model;
  GreedyConfig greedy;
  greedy.max_iterations = config.n;
  greedy.modes = config.m;
  greedy.threads = config.threads;
  greedy.tolerance = config.tolerance;
  if (config.kind == "pod-greedy") {
    log << "assembling diffusion model: mesh " << config.mesh << ", tau 2^-" << config.tau << ", "
        << config.params << " parameters\n";
    model = diffusion_model(config.mesh, config.tau, config.params);
    greedy.selection = selection_from_string(config.selection);
  } else {
    const int dimension = config.dimension > 0 ? config.dimension : 2 * config.n;
    model = sequence_model(config.alpha, config.lambda, dimension, TimeGrid(1.0, config.steps));
    greedy.selection = Selection::ExactError;
    greedy.track_reduced_error = false;
  }
  log << "running " << config.n << " POD-Greedy iterations with m = " << config.m << '\n';
  const GreedyResult result = pod_greedy(*model, greedy);
  write_greedy_outputs(config, *model, result, summary);
  if (config.width_proxy) {
    const SnapshotCache cache(*model, config.threads);
    write_widths(config.out, width_proxy(cache.trajectories(), model->inner_product()), summary);
  }
}

void run_eim(const ExperimentConfig& config, std::ostream& log, std::ostream& summary) {
  const fs::path dir = config.out;
  const FunctionFamily family =
      inverse_distance_family(config.levels, config.sigma, config.param_side);
  const bool classical = config.kind == "eim-classical";
  log << "running " << config.n << (classical ? " classical EIM" : " EIM-POD-Greedy")
      << " iterations on " << family.size() << " functions\n";
  const EimResult result = classical ? classical_eim_2d(family, config.n, config.threads)
                                     : eim_pod_greedy(family, config.n, config.m, config.threads);
  const EimReport& report = result.report;
  {
    auto csv = open_output(dir / "report.csv");
    write_eim_report_csv(csv, report, config.timings);
    auto js = open_output(dir / "report.json");
    write_eim_report_json(js, report);
    auto itp = open_output(dir / "interpolant.json");
    const auto sigma_count = static_cast<Eigen::Index>(family.points.size());
    write_interpolant_json(itp, result.interpolant, [&](Eigen::Index p) {
      if (!classical) return std::vector<double>{family.points[p]};
      return std::vector<double>{family.grid.node(static_cast<int>(p / sigma_count)),
                                 family.points[p % sigma_count]};
    });
  }

  std::vector<double> rows_sigma, n_axis;
  for (const auto& row : report.rows) {
    rows_sigma.push_back(row.sigma_hat);
    n_axis.push_back(row.n);
  }
  const std::vector<double> after = errors_after(rows_sigma, report.final_sigma_hat);
  {
    auto svg = open_output(dir / "convergence.svg");
    write_svg(svg, classical ? "classical EIM" : "EIM-POD-Greedy, m = " + std::to_string(config.m),
              "n", "max error in L2(I; l_inf)", {{"sigma_hat after n", n_axis, after}});
  }

  summary << "method: " << report.method << ", modes per iteration: " << report.modes << '\n';
  summary << "status: " << report.status << ", iterations: " << report.rows.size()
          << ", interpolant size: " << result.interpolant.size() << '\n';
  summary << "final error: " << sci(report.final_sigma_hat) << '\n';
  if (after.size() >= 2) {
    std::vector<double> ys, xs;
    for (std::size_t i = 0; i < after.size(); ++i) {
      if (!(after[i] > 0.0)) continue;
      xs.push_back(n_axis[i]);
      ys.push_back(std::log(after[i]));
    }
    summary << "fitted exponential rate: error ~ exp(" << fix(fit_slope(xs, ys), 4) << " n)\n";
  }
  summary << "\n  n  sigma_hat      theta      kappa  lambda_tilde  eta_bar\n";
  for (const auto& row : report.rows) {
    if (row.n % 4 != 0 && row.n != 1) continue;
    summary << std::setw(3) << row.n << ' ' << std::setw(10) << sci(row.sigma_hat, 3) << ' '
            << std::setw(10) << fix(row.theta) << ' ' << std::setw(10) << fix(row.kappa) << ' '
            << std::setw(13) << fix(row.lambda_tilde) << ' ' << std::setw(8) << fix(row.eta_bar)
            << '\n';
  }
  for (const auto& w : report.warnings) summary << "warning: " << w << '\n';
}

}  // namespace

void run_experiment(const ExperimentConfig& config, std::ostream& log) {
  validate(config);
  const fs::path dir = config.out;
  fs::create_directories(dir);
  {
    auto cfg = open_output(dir / "config.json");
    cfg << config_json(config);
  }
  std::ostringstream summary;
  summary << "experiment: " << config.kind << '\n';
  if (is_greedy_kind(config.kind))
    run_greedy(config, log, summary);
  else
    run_eim(config, log, summary);
  auto out = open_output(dir / "summary.txt");
  out << summary.str();
  log << "wrote " << (dir / "report.csv").string() << '\n';
}

RunCurve read_curve(const fs::path& run_dir) {
  using nlohmann::json;
  auto read_json = [&](const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing " + path.filename().string() + " (run not completed?)",
                               run_dir.string());
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(e.what(), path.string());
    }
  };
  const json config = read_json(run_dir / "config.json");
  const json report = read_json(run_dir / "report.json");

  RunCurve curve;
  curve.kind = config.value("kind", "");
  curve.label = run_dir.filename().empty() ? run_dir.parent_path().filename().string()
                                           : run_dir.filename().string();
  auto number = [](const json& v) { return v.is_number() ? v.get<double>() : kNaN; };
  const bool greedy = is_greedy_kind(curve.kind);
  std::vector<double> per_row;
  for (const auto& row : report.at("rows")) {
    curve.n.push_back(row.at("n").get<int>());
    curve.dimension.push_back(row.at(greedy ? "basis_size" : "size").get<int>());
    per_row.push_back(number(row.at(greedy ? "sigma" : "sigma_hat")));
  }
  curve.error = errors_after(per_row, number(report.at(greedy ? "final_sigma" : "final_sigma_hat")));
  return curve;
}

void write_comparison(std::ostream& out, const RunCurve& a, const RunCurve& b) {
  const bool compatible = a.kind == b.kind || (!is_greedy_kind(a.kind) && !is_greedy_kind(b.kind));
  if (!compatible)
    throw ConfigError("cannot compare a " + a.kind + " run with a " + b.kind + " run");
  std::string label_a = a.label, label_b = b.label;
  if (label_a == label_b) {
    label_a += "_a";
    label_b += "_b";
  }
  out << "axis,x," << label_a << ',' << label_b << '\n';
  auto cell = [](double v) {
    if (!std::isfinite(v)) return std::string();
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
  };
  auto block = [&](const char* axis, const std::vector<int>& xa, const std::vector<int>& xb) {
    std::map<int, std::pair<double, double>> rows;
    for (std::size_t i = 0; i < xa.size(); ++i) rows[xa[i]] = {a.error[i], kNaN};
    for (std::size_t i = 0; i < xb.size(); ++i) {
      auto [it, inserted] = rows.try_emplace(xb[i], kNaN, b.error[i]);
      if (!inserted) it->second.second = b.error[i];
    }
    for (const auto& [x, values] : rows)
      out << axis << ',' << x << ',' << cell(values.first) << ',' << cell(values.second) << '\n';
  };
  block("n", a.n, b.n);
  block("N", a.dimension, b.dimension);
}

}  // namespace mormor::cli
