#include "mormor/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "mormor/errors.hpp"
#include "mormor/parallel.hpp"

namespace mormor {

using detail::require;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kExhausted = 1e-12;

std::size_t argmax_lowest(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = k;
  return best;
}

double max_of(const std::vector<double>& values) {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

// Removes the components along b (G-unit, G-orthogonal to what was already
// removed) from every column of r.
void deflate(Matrix& r, const Vector& b, const Vector& gb) {
  const Vector along = r.transpose() * gb;
  r.noalias() -= b * along.transpose();
}

}  // namespace

std::string to_string(Selection selection) {
  return selection == Selection::ExactError ? "exact-error" : "estimator";
}

Selection selection_from_string(const std::string& text) {
  if (text == "exact-error" || text == "exact") return Selection::ExactError;
  if (text == "estimator") return Selection::Estimator;
  throw ContractViolation("unknown selection '" + text + "' (expected exact-error or estimator)");
}

SnapshotCache::SnapshotCache(const ParametricModel& model, int threads)
    : parameters_(model.training_set()) {
  std::vector<std::optional<Trajectory>> solved(parameters_.size());
  parallel_for(parameters_.size(), threads,
               [&](std::size_t k) { solved[k].emplace(model.solve(parameters_[k])); });
  trajectories_.reserve(solved.size());
  for (auto& t : solved) trajectories_.push_back(std::move(*t));
}

SigmaResult exact_sigma(const SnapshotCache& cache, const ReducedBasis& basis, int threads) {
  require(cache.size() > 0, "exact_sigma: empty training set");
  const InnerProduct& ip = basis.inner_product();
  std::vector<double> errors(cache.size());
  parallel_for(cache.size(), threads, [&](std::size_t k) {
    const Trajectory& u = cache[k];
    errors[k] = basis.empty() ? vt_norm(u, ip)
                              : vt_norm(u - project_trajectory(basis, u, ip), ip);
  });
  const std::size_t best = argmax_lowest(errors);
  return {errors[best], best, cache.parameters()[best]};
}

SigmaResult exact_sigma(const ParametricModel& model, const ReducedBasis& basis, int threads) {
  return exact_sigma(SnapshotCache(model, threads), basis, threads);
}

std::vector<double> width_proxy(const std::vector<Trajectory>& snapshots, const InnerProduct& ip) {
  if (snapshots.empty()) return {};
  Eigen::Index cols = 0;
  for (const auto& s : snapshots) {
    require(s.dim() == ip.dim(), "width_proxy: snapshot dimension mismatch");
    cols += s.node_count();
  }
  Matrix all(ip.dim(), cols);
  Eigen::Index at = 0;
  for (const auto& s : snapshots) {
    all.middleCols(at, s.node_count()) = std::sqrt(s.grid().tau()) * s.columns();
    at += s.node_count();
  }
  const Eigen::BDCSVD<Matrix> svd(ip.factor_apply(all));
  const Vector& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

GreedyResult pod_greedy(const ParametricModel& model, const GreedyConfig& config) {
  const auto& training = model.training_set();
  const TimeGrid& grid = model.grid();
  const InnerProduct& ip = model.inner_product();
  const bool estimator = config.selection == Selection::Estimator;
  require(config.modes >= 1, "pod_greedy: modes must be at least 1");
  require(config.max_iterations >= 1, "pod_greedy: max_iterations must be at least 1");
  require(!training.empty(), "pod_greedy: training set is empty");
  require(config.modes <= grid.node_count(), "pod_greedy: modes exceed the number of time nodes");
  require(!estimator || model.has_estimator(),
          "pod_greedy: estimator selection needs a model with an estimator");

  const int threads = config.threads > 0 ? config.threads : default_thread_count();
  const bool cached = !estimator || config.track_exact_error;

  GreedyResult result{ReducedBasis(ip, ip.dim()), {}, {}};
  GreedyReport& report = result.report;
  report.modes = config.modes;
  report.selection = config.selection;
  report.model = model.name();

  // Projection residuals u - P u of every training trajectory, kept current
  // as basis vectors are appended.
  std::vector<Matrix> residuals;
  std::vector<double> errors;
  if (cached) {
    const SnapshotCache cache(model, threads);
    residuals.reserve(cache.size());
    for (const auto& u : cache.trajectories()) residuals.push_back(u.columns());
    errors.resize(residuals.size());
  }
  auto refresh_errors = [&] {
    parallel_for(residuals.size(), threads, [&](std::size_t k) {
      errors[k] = vt_norm(Trajectory(grid, residuals[k]), ip);
    });
  };

  // Residuals below this are round-off: the training set is exhausted.
  double exhausted_below = 0.0;
  if (cached) {
    refresh_errors();
    exhausted_below = kExhausted * max_of(errors);
  }

  double previous_sigma = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= config.max_iterations; ++n) {
    const auto start = std::chrono::steady_clock::now();
    GreedyIteration row;
    row.n = n;
    row.sigma = kNaN;
    row.delta_sup = kNaN;
    row.gamma_eff = kNaN;
    row.reduced_error = kNaN;

    if (cached) {
      refresh_errors();
      row.sigma = max_of(errors);
    }
    double surrogate = 0.0;
    if (estimator) {
      const std::vector<double> deltas = model.estimate_all(result.basis, threads);
      row.index = argmax_lowest(deltas);
      row.delta_sup = deltas[row.index];
      surrogate = row.delta_sup;
    } else {
      row.index = argmax_lowest(errors);
      surrogate = row.sigma;
    }
    row.mu = training[row.index];

    if (surrogate <= config.tolerance) {
      report.status = "converged";
      break;
    }
    if (!estimator && row.sigma > previous_sigma * (1.0 + 1e-12))
      report.warnings.push_back("sigma increased at n = " + std::to_string(n));
    previous_sigma = row.sigma;

    Matrix r;
    std::optional<Trajectory> full;
    if (cached) {
      r = residuals[row.index];
    } else {
      full.emplace(model.solve(row.mu));
      r = full->columns() - result.basis.project(full->columns());
    }
    const Trajectory residual(grid, r);
    row.residual_norm = vt_norm(residual, ip);
    if (!cached && n == 1) exhausted_below = kExhausted * row.residual_norm;
    if (row.residual_norm <= exhausted_below) {
      report.status = "manifold exhausted";
      break;
    }
    if (cached && row.sigma > 0.0) row.gamma_eff = row.residual_norm / row.sigma;

    if (config.track_reduced_error) {
      if (const auto reduced = model.solve_reduced(row.mu, result.basis)) {
        if (!full) full.emplace(model.solve(row.mu));
        row.reduced_error = vt_norm(*full - *reduced, ip);
      }
    }

    const int m = static_cast<int>(std::min<Eigen::Index>(config.modes, ip.dim()));
    const CorrelationSpectrum spectrum = pod_modes(residual, ip, m, 0.0);
    row.lambdas = spectrum.eigenvalues;
    const double top = spectrum.eigenvalues.front();
    row.theta = top > 0.0 ? spectrum.eigenvalues.back() / top : kNaN;
    if (!result.basis.empty()) {
      const Matrix coupling = result.basis.gram_vectors().transpose() * spectrum.modes;
      row.mode_coupling = coupling.cwiseAbs().maxCoeff();
    }

    const Eigen::Index before = result.basis.size();
    for (int k = 0; k < m; ++k) {
      if (spectrum.degenerate[k] || !result.basis.append(spectrum.modes.col(k))) {
        ++row.dropped_modes;
        continue;
      }
    }
    row.dropped_modes += config.modes - m;
    if (result.basis.size() == before) {
      report.status = "manifold exhausted";
      break;
    }
    result.modes.push_back(spectrum.modes);

    if (cached) {
      parallel_for(residuals.size(), threads, [&](std::size_t k) {
        for (Eigen::Index c = before; c < result.basis.size(); ++c)
          deflate(residuals[k], result.basis.vectors().col(c), result.basis.gram_vectors().col(c));
      });
    }

    row.basis_size = static_cast<int>(result.basis.size());
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }

  if (cached) {
    refresh_errors();
    report.final_sigma = max_of(errors);
  } else {
    report.final_sigma = kNaN;
  }
  return result;
}

}  // namespace mormor
