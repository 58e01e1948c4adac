// Acceptance driver: one PASS/FAIL line per criterion.
//
//   mormor_acceptance [--work DIR]               prepare runs, check everything
//   mormor_acceptance [--work DIR] --prepare     only execute the CLI runs
//   mormor_acceptance [--work DIR] --criterion K check one criterion

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "mormor/eim.hpp"
#include "mormor/fem.hpp"
#include "mormor/greedy.hpp"
#include "mormor/models.hpp"
#include "mormor/pod.hpp"
#include "mormor/reduced_basis.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mormor;
using mormor::testing::Rng;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v, int digits = 3) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(digits) << v;
  return s.str();
}

std::string fix(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double nan_if_null(const json& v) { return v.is_null() ? std::nan("") : v.get<double>(); }

// ---------------------------------------------------------------------------
// CLI runs shared by several criteria

struct PlannedRun {
  std::string name;
  json config;
};

const std::vector<PlannedRun>& planned_runs() {
  static const std::vector<PlannedRun> specs = {
      {"pod-m1", {{"kind", "pod-greedy"}, {"mesh", 65}, {"tau", 7}, {"params", 20}, {"m", 1}, {"n", 20}}},
      {"pod-m2", {{"kind", "pod-greedy"}, {"mesh", 65}, {"tau", 7}, {"params", 20}, {"m", 2}, {"n", 10}}},
      {"pod-estimator",
       {{"kind", "pod-greedy"}, {"mesh", 65}, {"tau", 7}, {"params", 20}, {"m", 1}, {"n", 10},
        {"selection", "estimator"}}},
      {"sequence-a1", {{"kind", "sequence-rate"}, {"alpha", 1.0}, {"lambda", 1.0}, {"n", 50}}},
      {"sequence-a2", {{"kind", "sequence-rate"}, {"alpha", 2.0}, {"lambda", 1.0}, {"n", 50}}},
      {"eim-pod", {{"kind", "eim-pod-greedy"}, {"levels", 128}, {"sigma", 100}, {"param_side", 10}, {"n", 20}, {"m", 1}}},
      {"eim-pod-m2",
       {{"kind", "eim-pod-greedy"}, {"levels", 128}, {"sigma", 100}, {"param_side", 10}, {"n", 10}, {"m", 2}}},
      {"eim-classical",
       {{"kind", "eim-classical"}, {"levels", 128}, {"sigma", 100}, {"param_side", 10}, {"n", 40}}},
  };
  return specs;
}

class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}

  fs::path config_path(const std::string& name) const { return root_ / "configs" / (name + ".json"); }
  fs::path run_dir(const std::string& name, const std::string& set = "runs") const { return root_ / set / name; }

  /// Executes one config through the command-line entry point.
  double execute(const PlannedRun& run, const std::string& set = "runs") const {
    fs::create_directories(root_ / "configs");
    fs::create_directories(root_ / "logs");
    {
      std::ofstream out(config_path(run.name));
      out << run.config.dump(2) << '\n';
    }
    const fs::path dir = run_dir(run.name, set);
    fs::remove_all(dir);
    const std::string config = config_path(run.name).string();
    const std::string out_dir = dir.string();
    const char* argv[] = {"mormor", "run", "--config", config.c_str(), "--out", out_dir.c_str()};
    std::ofstream log(root_ / "logs" / (set + "-" + run.name + ".log"));
    const auto start = std::chrono::steady_clock::now();
    const int code = cli::main_entry(6, argv, log, log);
    const double elapsed = seconds_since(start);
    if (code != 0) throw std::runtime_error("run '" + run.name + "' exited with " + std::to_string(code));
    timings_[set + "/" + run.name] = elapsed;
    return elapsed;
  }

  void prepare() const {
    json times;
    for (const auto& run : planned_runs()) {
      const double s = execute(run);
      times[run.name] = s;
      std::cout << "  ran " << run.name << " in " << fix(s, 1) << " s\n";
    }
    std::ofstream(root_ / "timings.json") << times.dump(2) << '\n';
  }

  /// report.json of a run, executing it first if absent.
  json report(const std::string& name) const {
    const fs::path path = run_dir(name) / "report.json";
    if (!fs::exists(path)) {
      for (const auto& run : planned_runs())
        if (run.name == name) execute(run);
    }
    std::ifstream in(path);
    return json::parse(in);
  }

  /// Wall time of the prepared run, NaN when unknown.
  double timing(const std::string& name) const {
    auto it = timings_.find("runs/" + name);
    if (it != timings_.end()) return it->second;
    std::ifstream in(root_ / "timings.json");
    if (!in) return std::nan("");
    const json times = json::parse(in, nullptr, false);
    return times.contains(name) ? times[name].get<double>() : std::nan("");
  }

 private:
  fs::path root_;
  mutable std::map<std::string, double> timings_;
};

// error after n iterations: sigma of row n+1, final value after the last row
std::vector<double> errors_after(const json& report, const char* key, const char* final_key) {
  std::vector<double> out;
  const auto& rows = report["rows"];
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(nan_if_null(rows[i][key]));
  if (!rows.empty()) out.push_back(nan_if_null(report[final_key]));
  return out;
}

// ---------------------------------------------------------------------------

Verdict spectral_identity() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index dim = rng.integer(1, 20);
    const InnerProduct ip = InnerProduct::from_dense(rng.spd(dim));
    const auto v = rng.trajectory(dim, rng.integer(0, 16), rng.uniform(0.2, 3.0));
    const double norm2 = vt_inner(v, v, ip);
    worst = std::max(worst, std::abs(spectrum_total(v, ip) - norm2) / norm2);
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 1.0,
          "max rel. deviation " + sci(worst) + " over 50 trajectories, " + fix(elapsed, 3) + " s"};
}

Verdict pod_optimality() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1002);
  double worst_tail = 0.0;
  int beaten = 0, comparisons = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const InnerProduct ip = InnerProduct::from_dense(rng.spd(4));
    const auto v = rng.trajectory(4, 5);
    const auto lambda = correlation_eigenvalues(v, ip);
    auto projection_error = [&](const Matrix& span) {
      const Trajectory p = project_trajectory(ReducedBasis::from_span(ip, span), v, ip);
      return vt_inner(v - p, v - p, ip);
    };
    for (int m = 1; m <= 4; ++m) {
      const auto spectrum = pod_modes(v, ip, m);
      double tail = 0.0;
      for (std::size_t i = m; i < lambda.size(); ++i) tail += lambda[i];
      const double optimal = projection_error(spectrum.modes);
      const double total = vt_inner(v, v, ip);
      worst_tail = std::max(worst_tail, std::abs(optimal - tail) / std::max(tail, 1e-12 * total));
      for (int k = 0; k < 100; ++k) {
        ++comparisons;
        if (projection_error(rng.matrix(4, m)) < optimal - 1e-12 * total) ++beaten;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst_tail <= 1e-9 && beaten == 0 && elapsed < 5.0,
          "max rel. tail deviation " + sci(worst_tail) + ", random subspaces better: " + std::to_string(beaten) +
              "/" + std::to_string(comparisons) + ", " + fix(elapsed, 2) + " s"};
}

Verdict span_identity() {
  Rng rng(1003);
  const Matrix g = rng.spd(18);
  std::vector<Trajectory> table;
  for (int k = 0; k < 8; ++k) table.emplace_back(TimeGrid(1.0, 7), rng.matrix(18, 3) * rng.matrix(3, 8));
  const mormor::testing::TableModel model(InnerProduct::from_dense(g), table);
  GreedyConfig config;
  config.max_iterations = 5;
  config.modes = 2;
  const GreedyResult result = pod_greedy(model, config);
  const InnerProduct& ip = model.inner_product();
  Matrix v(18, 0);
  int before = 0;
  for (std::size_t i = 0; i < result.report.rows.size(); ++i) {
    const auto& row = result.report.rows[i];
    const Trajectory u = model.solve(row.mu);
    const Trajectory r = u - project_trajectory(result.basis.truncated(before), u, ip);
    for (Eigen::Index k = 0; k < result.modes[i].cols(); ++k) {
      const Vector weights = u.grid().tau() * (r.columns().transpose() * (g * result.modes[i].col(k)));
      v.conservativeResize(Eigen::NoChange, v.cols() + 1);
      v.col(v.cols() - 1) = u.columns() * weights;
    }
    before = row.basis_size;
  }
  const Eigen::Index rank = g_rank(v, ip);
  const double angle = max_principal_angle(v, result.basis.vectors(), ip);
  return {result.report.rows.size() == 5 && rank == result.basis.size() && angle <= 1e-7,
          "rank " + std::to_string(rank) + " vs basis " + std::to_string(result.basis.size()) +
              ", max principal angle " + sci(angle)};
}

Verdict fem_convergence() {
  using std::numbers::pi;
  const auto start = std::chrono::steady_clock::now();
  const TimeGrid grid = TimeGrid::from_step_exponent(1.0, 10);
  auto error = [&](int n_side) {
    const AssembledOperators ops = assemble(build_mesh(n_side), ProblemData::manufactured());
    const Trajectory u = solve_full(ops, 1.0, grid);
    double sum = 0.0;
    for (int j = 0; j < grid.node_count(); ++j) {
      const double t = grid.node(j);
      const Vector e = u.columns().col(j) - ops.interpolate([t](double x, double y) {
        return std::exp(-t) * std::sin(pi * x) * std::sin(pi * y);
      });
      sum += grid.tau() * e.dot(ops.mass() * e);
    }
    return std::sqrt(sum);
  };
  const double coarse = error(33), fine = error(65);
  const double ratio = coarse / fine;
  const double elapsed = seconds_since(start);
  return {std::abs(ratio - 4.0) <= 0.4 && elapsed < 30.0,
          "L2 errors " + sci(coarse) + " / " + sci(fine) + ", ratio " + fix(ratio, 3) + ", " + fix(elapsed, 1) + " s"};
}

Verdict galerkin_reproduction() {
  auto model = diffusion_model(33, 6, 5);
  std::vector<Trajectory> full;
  Matrix all(model->operators().dim(), 0);
  for (double mu : model->training_set()) {
    full.push_back(model->solve(mu));
    const Matrix& c = full.back().columns();
    all.conservativeResize(Eigen::NoChange, all.cols() + c.cols());
    all.rightCols(c.cols()) = c;
  }
  const ReducedBasis basis = ReducedBasis::from_span(model->inner_product(), all);
  double worst = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const Trajectory r = *model->solve_reduced(model->training_set()[k], basis);
    worst = std::max(worst, vt_norm(r - full[k], model->inner_product()) / vt_norm(full[k], model->inner_product()));
  }
  return {worst <= 1e-8, "basis size " + std::to_string(basis.size()) + ", max V_T rel. error " + sci(worst)};
}

Verdict rate_theorem() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double alpha : {1.0, 2.0}) {
    const TimeGrid grid(1.0, 32);
    const SequenceModel model(alpha, 1.0, 100, grid);
    GreedyConfig config;
    config.max_iterations = 50;
    const GreedyResult result = pod_greedy(model, config);
    std::vector<double> n, sigma;
    double worst = 0.0;
    for (const auto& row : result.report.rows) {
      n.push_back(row.n);
      sigma.push_back(row.sigma);
      const double closed = model.time_factor() * model.amplitude(row.n);
      worst = std::max(worst, std::abs(row.sigma - closed) / closed);
    }
    const double slope = cli::loglog_slope(n, sigma, 10.0, 50.0);
    ok = ok && result.report.rows.size() == 50 && std::abs(slope + alpha) <= 0.1 && worst <= 1e-12;
    detail += "alpha " + fix(alpha, 0) + ": slope " + fix(slope, 4) + ", closed-form dev. " + sci(worst) + "; ";
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 5.0;
  return {ok, detail + fix(elapsed, 2) + " s"};
}

Verdict desk_scale_decay(const Workspace& ws) {
  const json m1 = ws.report("pod-m1"), m2 = ws.report("pod-m2");
  auto curve = [](const json& report) {
    std::map<int, double> out;
    const auto after = errors_after(report, "sigma", "final_sigma");
    for (std::size_t i = 0; i < after.size(); ++i) out[report["rows"][i]["basis_size"].get<int>()] = after[i];
    return out;
  };
  const auto c1 = curve(m1), c2 = curve(m2);
  auto monotone = [](const std::map<int, double>& c) {
    double previous = INFINITY;
    for (const auto& [n, e] : c) {
      if (!(e < previous)) return false;
      previous = e;
    }
    return true;
  };
  const bool mono = monotone(c1) && monotone(c2);
  const double ratio = c1.count(20) && c1.count(1) ? c1.at(20) / c1.at(1) : std::nan("");
  double band_lo = INFINITY, band_hi = 0.0;
  for (const auto& [n, e] : c2) {
    if (!c1.count(n)) continue;
    band_lo = std::min(band_lo, e / c1.at(n));
    band_hi = std::max(band_hi, e / c1.at(n));
  }
  const double runtime = ws.timing("pod-m1") + ws.timing("pod-m2");
  const bool within = band_lo >= 0.1 && band_hi <= 10.0;
  std::string detail = "monotone " + std::string(mono ? "yes" : "no") + ", E_20/E_1 = " + sci(ratio) +
                       ", E(m=2)/E(m=1) at equal N in [" + fix(band_lo, 3) + ", " + fix(band_hi, 3) + "]";
  bool ok = mono && ratio <= 1e-3 && within;
  if (std::isfinite(runtime)) {
    detail += ", " + fix(runtime, 1) + " s";
    ok = ok && runtime < 600.0;
  }
  return {ok, detail};
}

Verdict estimator_effectivity(const Workspace& ws) {
  const json report = ws.report("pod-estimator");
  double lo = INFINITY, hi = 0.0;
  int count = 0;
  for (const auto& row : report["rows"]) {
    const double eff = nan_if_null(row["delta_sup"]) / nan_if_null(row["reduced_error"]);
    lo = std::min(lo, std::isfinite(eff) ? eff : -INFINITY);
    hi = std::max(hi, std::isfinite(eff) ? eff : INFINITY);
    ++count;
  }
  return {count == 10 && lo >= 0.1 && hi <= 10.0,
          std::to_string(count) + " iterations, Delta_n / e_n in [" + fix(lo, 3) + ", " + fix(hi, 3) + "]"};
}

Verdict theta_ranges(const Workspace& ws) {
  int checked = 0, bad = 0;
  double theta_min = INFINITY;
  for (const char* name : {"pod-m1", "pod-m2", "pod-estimator", "sequence-a1", "sequence-a2", "eim-pod", "eim-pod-m2"}) {
    const json report = ws.report(name);
    for (const auto& row : report["rows"]) {
      const double theta = nan_if_null(row["theta"]);
      bool row_ok = theta > 0.0 && theta <= 1.0;
      for (const auto& l : row["lambdas"]) row_ok = row_ok && !l.is_null() && l.get<double>() >= 0.0;
      bad += !row_ok;
      ++checked;
      if (std::isfinite(theta)) theta_min = std::min(theta_min, theta);
    }
  }
  return {bad == 0 && checked > 0, std::to_string(checked) + " rows across 7 runs, min theta " + sci(theta_min) +
                                       ", violations " + std::to_string(bad)};
}

Verdict eim_structure() {
  const FunctionFamily family = inverse_distance_family(128, 100, 10);
  const EimResult result = eim_pod_greedy(family, 20, 1);
  const EimInterpolant& itp = result.interpolant;
  const Matrix& b = itp.matrix();
  double diag = 0.0, upper = 0.0, lower = 0.0;
  for (Eigen::Index i = 0; i < itp.size(); ++i) {
    diag = std::max(diag, std::abs(b(i, i) - 1.0));
    for (Eigen::Index j = 0; j < itp.size(); ++j) {
      if (j > i) upper = std::max(upper, std::abs(b(i, j)));
      if (j < i) lower = std::max(lower, std::abs(b(i, j)));
    }
  }
  double at_points = 0.0, idempotent = 0.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Matrix v = family.values(k);
    const Matrix p = itp.interpolate_columns(v);
    for (Eigen::Index i = 0; i < itp.size(); ++i)
      at_points = std::max(at_points, (p.row(itp.points()[i]) - v.row(itp.points()[i])).cwiseAbs().maxCoeff());
    idempotent = std::max(idempotent, (itp.interpolate_columns(p) - p).cwiseAbs().maxCoeff());
  }
  Rng rng(1010);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector g = itp.basis() * rng.vector(itp.size());
    idempotent = std::max(idempotent, (itp.interpolate_function(g) - g).cwiseAbs().maxCoeff() /
                                          std::max(1.0, g.cwiseAbs().maxCoeff()));
  }
  const double lebesgue1 = lebesgue_bound(itp.truncated(1));
  const bool ok = diag == 0.0 && upper <= 1e-14 && lower <= 1.0 + 1e-12 && at_points <= 1e-12 &&
                  idempotent <= 1e-12 && lebesgue1 == 1.0;
  return {ok, "size " + std::to_string(itp.size()) + ", max |B_ij| below diag " + fix(lower, 6) +
                  ", above diag " + sci(upper, 1) + ", magic-point error " + sci(at_points, 1) +
                  ", idempotency " + sci(idempotent, 1) +
                  ", Lambda_1 = " + fix(lebesgue1, 1)};
}

Verdict eim_diagnostics(const Workspace& ws) {
  const json report = ws.report("eim-pod");
  const auto& rows = report["rows"];
  bool ok = true;
  std::string detail = "eta_bar:";
  for (int n : {4, 8, 12, 16, 20}) {
    if (static_cast<std::size_t>(n) > rows.size()) {
      detail += " n=" + std::to_string(n) + " missing;";
      ok = false;
      continue;
    }
    const double eta = nan_if_null(rows[n - 1]["eta_bar"]);
    const bool in = eta >= 0.9 && eta <= 1.05;
    ok = ok && in;
    detail += " n=" + std::to_string(n) + " " + fix(eta, 4) + (in ? "" : "(out)") + ";";
  }
  if (rows.size() >= 20) {
    const double lt = nan_if_null(rows[19]["lambda_tilde"]), kappa = nan_if_null(rows[19]["kappa"]);
    ok = ok && lt <= 20.0 && kappa <= 200.0;
    detail += " Lambda_20 " + fix(lt, 3) + ", kappa_20 " + fix(kappa, 3);
  } else {
    const auto& last = rows.back();
    detail += " Lambda_20/kappa_20 unavailable (status '" + report["status"].get<std::string>() + "' after n=" +
              std::to_string(rows.size()) + ", final sigma_hat " + sci(nan_if_null(report["final_sigma_hat"])) +
              "; at n=" + std::to_string(last["n"].get<int>()) + ": Lambda " + fix(nan_if_null(last["lambda_tilde"]), 3) +
              ", kappa " + fix(nan_if_null(last["kappa"]), 3) + ")";
  }
  const double runtime = ws.timing("eim-pod");
  if (std::isfinite(runtime)) {
    ok = ok && runtime < 120.0;
    detail += ", " + fix(runtime, 1) + " s";
  }
  return {ok, detail};
}

Verdict eim_versus_classical(const Workspace& ws) {
  const json pod = ws.report("eim-pod"), cls = ws.report("eim-classical");
  auto reach = [](const std::vector<double>& after) {
    for (std::size_t i = 0; i < after.size(); ++i)
      if (after[i] <= 1e-4) return static_cast<int>(i) + 1;
    return -1;
  };
  const int n_pod = reach(errors_after(pod, "sigma_hat", "final_sigma_hat"));
  const int n_cls = reach(errors_after(cls, "sigma_hat", "final_sigma_hat"));
  auto monotone = [](const json& rows, const char* key) {
    double previous = INFINITY;
    for (const auto& row : rows) {
      const double v = nan_if_null(row[key]);
      if (!(v <= previous)) return false;
      previous = v;
    }
    return true;
  };
  const bool mono_pod = monotone(pod["rows"], "sigma_hat");
  const bool mono_cls = monotone(cls["rows"], "sup_error");
  const bool ok = n_pod > 0 && n_cls > 0 && n_pod <= n_cls && mono_pod && mono_cls;
  return {ok, "iterations to reach 1e-4 in L2(I; l_inf): EIM-POD-Greedy " + std::to_string(n_pod) +
                  ", classical " + std::to_string(n_cls) + "; monotone sigma_hat (EIM-POD) " +
                  (mono_pod ? "yes" : "no") + ", monotone sup error (classical) " + (mono_cls ? "yes" : "no")};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism(const Workspace& ws) {
  int identical = 0;
  std::string differing;
  for (const auto& run : planned_runs()) {
    ws.report(run.name);
    ws.execute(run, "runs-repeat");
    const std::string a = slurp(ws.run_dir(run.name) / "report.csv");
    const std::string b = slurp(ws.run_dir(run.name, "runs-repeat") / "report.csv");
    if (!a.empty() && a == b)
      ++identical;
    else
      differing += " " + run.name;
  }
  const int total = static_cast<int>(planned_runs().size());
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " report.csv files byte-identical" + (differing.empty() ? "" : ", differ:" + differing)};
}

struct Criterion {
  int id;
  std::string title;
  std::function<Verdict(const Workspace&)> check;
};

std::vector<Criterion> criteria() {
  return {
      {1, "spectral identity", [](const Workspace&) { return spectral_identity(); }},
      {2, "POD optimality", [](const Workspace&) { return pod_optimality(); }},
      {3, "span identity", [](const Workspace&) { return span_identity(); }},
      {4, "FEM convergence", [](const Workspace&) { return fem_convergence(); }},
      {5, "Galerkin reproduction", [](const Workspace&) { return galerkin_reproduction(); }},
      {6, "rate on the sequence model", [](const Workspace&) { return rate_theorem(); }},
      {7, "desk-scale POD-Greedy decay", desk_scale_decay},
      {8, "estimator effectivity", estimator_effectivity},
      {9, "theta ranges", theta_ranges},
      {10, "EIM structure", [](const Workspace&) { return eim_structure(); }},
      {11, "EIM diagnostics table", eim_diagnostics},
      {12, "EIM-POD-Greedy vs classical EIM", eim_versus_classical},
      {13, "determinism", determinism},
  };
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::current_path() / "acceptance-work";
  int only = 0;
  bool prepare_only = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work" && i + 1 < argc) {
      work = argv[++i];
    } else if (arg == "--criterion" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else if (arg == "--prepare") {
      prepare_only = true;
    } else {
      std::cerr << "usage: mormor_acceptance [--work DIR] [--prepare | --criterion K]\n";
      return 2;
    }
  }
  const Workspace ws(work);
  try {
    if (prepare_only || only == 0) ws.prepare();
  } catch (const std::exception& e) {
    std::cout << "FAIL preparing runs: " << e.what() << '\n';
    return 1;
  }
  if (prepare_only) return 0;

  int failures = 0;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    Verdict v;
    try {
      v = c.check(ws);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << v.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
