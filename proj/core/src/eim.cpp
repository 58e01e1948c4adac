#include "mormor/eim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "mormor/errors.hpp"
#include "mormor/parallel.hpp"
#include "mormor/pod.hpp"

namespace mormor {

using detail::require;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative size below which a residual counts as already interpolated.
constexpr double kVanishing = 1e-12;
// Relative error below which the family counts as exhausted.
constexpr double kExhausted = 1e-12;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix rows_at(const Matrix& g, const std::vector<Eigen::Index>& points) {
  Matrix out(static_cast<Eigen::Index>(points.size()), g.cols());
  for (std::size_t i = 0; i < points.size(); ++i) out.row(i) = g.row(points[i]);
  return out;
}

std::size_t argmax_lowest(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = k;
  return best;
}

std::vector<Matrix> sample_family(const FunctionFamily& family, int threads) {
  std::vector<Matrix> values(family.size());
  parallel_for(family.size(), threads, [&](std::size_t k) { values[k] = family.values(k); });
  return values;
}

}  // namespace

Matrix FunctionFamily::values(std::size_t k) const {
  require(k < parameters.size(), "FunctionFamily: parameter index out of range");
  Matrix a(static_cast<Eigen::Index>(points.size()), grid.node_count());
  for (int j = 0; j < grid.node_count(); ++j) {
    const double t = grid.node(j);
    for (std::size_t i = 0; i < points.size(); ++i) a(i, j) = evaluator(parameters[k], t, points[i]);
  }
  return a;
}

EimInterpolant::EimInterpolant(Eigen::Index candidate_count)
    : basis_(candidate_count, 0), matrix_(0, 0) {
  require(candidate_count > 0, "EimInterpolant: empty candidate set");
}

Vector EimInterpolant::coefficients(const Vector& values_at_points) const {
  require(values_at_points.size() == size(),
          "interpolate: expected " + std::to_string(size()) + " values, got " +
              std::to_string(values_at_points.size()));
  if (empty()) return Vector(0);
  return matrix_.triangularView<Eigen::Lower>().solve(values_at_points);
}

Vector EimInterpolant::interpolate(const Vector& values_at_points) const {
  if (empty()) {
    require(values_at_points.size() == 0, "interpolate: expected 0 values");
    return Vector::Zero(candidate_count());
  }
  return basis_ * coefficients(values_at_points);
}

Vector EimInterpolant::interpolate_function(const Vector& g) const {
  require(g.size() == candidate_count(), "interpolate_function: size mismatch");
  Vector at_points(size());
  for (Eigen::Index i = 0; i < size(); ++i) at_points(i) = g(points_[i]);
  return interpolate(at_points);
}

Matrix EimInterpolant::interpolate_columns(const Matrix& g) const {
  require(g.rows() == candidate_count(), "interpolate_columns: size mismatch");
  if (empty()) return Matrix::Zero(g.rows(), g.cols());
  const Matrix c = matrix_.triangularView<Eigen::Lower>().solve(rows_at(g, points_));
  return basis_ * c;
}

Eigen::Index EimInterpolant::append(const Vector& residual) {
  require(residual.size() == candidate_count(), "EimInterpolant::append: size mismatch");
  Vector r = residual;
  for (Eigen::Index p : points_) r(p) = 0.0;

  Eigen::Index point = 0;
  const double peak = r.cwiseAbs().maxCoeff(&point);
  if (!(peak > 0.0)) return -1;

  const Eigen::Index n = size();
  Vector q = r / r(point);
  q(point) = 1.0;
  points_.push_back(point);
  basis_.conservativeResize(Eigen::NoChange, n + 1);
  basis_.col(n) = q;

  Matrix grown = Matrix::Zero(n + 1, n + 1);
  grown.topLeftCorner(n, n) = matrix_;
  for (Eigen::Index j = 0; j <= n; ++j) grown(n, j) = basis_(point, j);
  grown(n, n) = 1.0;
  matrix_ = std::move(grown);
  return point;
}

EimInterpolant EimInterpolant::truncated(Eigen::Index k) const {
  require(k >= 0 && k <= size(), "EimInterpolant::truncated: size out of range");
  EimInterpolant out(candidate_count());
  out.points_.assign(points_.begin(), points_.begin() + k);
  out.basis_ = basis_.leftCols(k);
  out.matrix_ = matrix_.topLeftCorner(k, k);
  return out;
}

Vector interpolate(const EimInterpolant& itp, const Vector& values_at_points) {
  return itp.interpolate(values_at_points);
}

double lebesgue_bound(const EimInterpolant& itp) {
  require(!itp.empty(), "lebesgue_bound: interpolant is empty");
  // W^T = B^{-T} Q^T; column x of W^T holds w_1(x) .. w_n(x).
  const Matrix cardinal_t =
      itp.matrix().transpose().triangularView<Eigen::Upper>().solve(itp.basis().transpose());
  return cardinal_t.cwiseAbs().colwise().sum().maxCoeff();
}

double condition_number(const EimInterpolant& itp) {
  require(!itp.empty(), "condition_number: interpolant is empty");
  Eigen::JacobiSVD<Matrix> svd(itp.matrix());
  const Vector& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

double linf_l2_norm(const Matrix& values, double tau) {
  if (values.size() == 0) return 0.0;
  const Vector peaks = values.cwiseAbs().colwise().maxCoeff().transpose();
  return std::sqrt(tau * peaks.squaredNorm());
}

double eim_estimator(const EimInterpolant& itp, const FunctionFamily& family, std::size_t index) {
  require(!itp.empty(), "eim_estimator: interpolant is empty");
  require(itp.candidate_count() == static_cast<Eigen::Index>(family.points.size()),
          "eim_estimator: interpolant and family use different candidate sets");
  const Eigen::Index newest = itp.points().back();
  const EimInterpolant previous = itp.truncated(itp.size() - 1);
  const Matrix a = family.values(index);
  const Matrix residual = a - previous.interpolate_columns(a);
  return std::sqrt(family.grid.tau() * residual.row(newest).squaredNorm());
}

EimResult eim_pod_greedy(const FunctionFamily& family, int iterations, int modes, int threads) {
  const Eigen::Index sigma_count = static_cast<Eigen::Index>(family.points.size());
  require(family.size() > 0, "eim_pod_greedy: family is empty");
  require(iterations >= 1 && modes >= 1, "eim_pod_greedy: iterations and modes must be positive");
  require(sigma_count >= static_cast<Eigen::Index>(modes) * iterations,
          "eim_pod_greedy: |Sigma| must be at least m * N");
  require(modes <= family.grid.node_count(), "eim_pod_greedy: m exceeds the number of time levels");

  const double tau = family.grid.tau();
  const InnerProduct euclidean = InnerProduct::identity(sigma_count);
  const std::vector<Matrix> values = sample_family(family, threads);

  double scale = 0.0;
  for (const auto& a : values) scale = std::max(scale, linf_l2_norm(a, tau));

  EimResult result{EimInterpolant(sigma_count), {}, {}};
  EimReport& report = result.report;
  report.method = "eim-pod-greedy";
  report.modes = modes;

  std::vector<Matrix> residuals(values.size());
  std::vector<double> errors(values.size());
  auto refresh_residuals = [&] {
    parallel_for(values.size(), threads, [&](std::size_t k) {
      residuals[k] = values[k] - result.interpolant.interpolate_columns(values[k]);
      errors[k] = linf_l2_norm(residuals[k], tau);
    });
  };

  double previous_sigma = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= iterations; ++n) {
    const auto start = std::chrono::steady_clock::now();
    refresh_residuals();
    const std::size_t selected = argmax_lowest(errors);
    const double sigma_hat = errors[selected];
    if (!(sigma_hat > kExhausted * scale)) {
      report.status = "family exhausted";
      break;
    }
    if (sigma_hat > previous_sigma * (1.0 + 1e-10))
      report.warnings.push_back("sigma_hat increased at n = " + std::to_string(n));
    previous_sigma = sigma_hat;

    EimIteration row;
    row.n = n;
    row.index = selected;
    row.mu = family.parameters[selected];
    row.sigma_hat = sigma_hat;
    row.sup_error = residuals[selected].cwiseAbs().maxCoeff();

    const Trajectory r(family.grid, residuals[selected]);
    const auto spectrum = pod_modes(r, euclidean, modes, 0.0);
    row.lambdas = spectrum.eigenvalues;
    row.theta = spectrum.eigenvalues.front() > 0.0
                    ? spectrum.eigenvalues.back() / spectrum.eigenvalues.front()
                    : kNaN;
    result.modes.push_back(spectrum.modes);

    std::vector<Eigen::Index> added;
    for (int k = 0; k < modes; ++k) {
      const Vector f = spectrum.modes.col(k);
      const Vector rk = f - result.interpolant.interpolate_function(f);
      if (spectrum.degenerate[k] || !(rk.cwiseAbs().maxCoeff() > kVanishing * f.cwiseAbs().maxCoeff())) {
        ++row.skipped_modes;
        continue;
      }
      const Eigen::Index point = result.interpolant.append(rk);
      if (point < 0) {
        ++row.skipped_modes;
        continue;
      }
      added.push_back(point);
    }
    if (added.empty()) {
      report.status = "family exhausted";
      break;
    }

    // Effectivity of the point estimator built on this iteration's points.
    double eta_sum = 0.0;
    int eta_count = 0;
    for (std::size_t k = 0; k < residuals.size(); ++k) {
      if (!(errors[k] > 0.0)) continue;
      double estimate = 0.0;
      for (Eigen::Index p : added)
        estimate = std::max(estimate, std::sqrt(tau * residuals[k].row(p).squaredNorm()));
      eta_sum += estimate / errors[k];
      ++eta_count;
    }
    row.eta_bar = eta_count > 0 ? eta_sum / eta_count : kNaN;
    row.kappa = condition_number(result.interpolant);
    row.lambda_tilde = lebesgue_bound(result.interpolant);
    row.size = static_cast<int>(result.interpolant.size());
    row.seconds = seconds_since(start);
    report.rows.push_back(std::move(row));
  }

  refresh_residuals();
  report.final_sigma_hat = *std::max_element(errors.begin(), errors.end());
  return result;
}

EimResult classical_eim_2d(const FunctionFamily& family, int iterations, int threads) {
  require(family.size() > 0, "classical_eim_2d: family is empty");
  require(iterations >= 1, "classical_eim_2d: iterations must be positive");
  const Eigen::Index sigma_count = static_cast<Eigen::Index>(family.points.size());
  const Eigen::Index levels = family.grid.node_count();
  const Eigen::Index candidates = sigma_count * levels;
  require(candidates >= iterations, "classical_eim_2d: too few space-time candidates");
  const double tau = family.grid.tau();

  // Column-major flattening: entry i + j |Sigma| is (t_j, x_i).
  std::vector<Vector> values(family.size());
  parallel_for(family.size(), threads, [&](std::size_t k) {
    const Matrix a = family.values(k);
    values[k] = Eigen::Map<const Vector>(a.data(), a.size());
  });

  EimResult result{EimInterpolant(candidates), {}, {}};
  EimReport& report = result.report;
  report.method = "eim-classical";
  report.modes = 1;

  double scale = 0.0;
  for (const auto& a : values) scale = std::max(scale, a.cwiseAbs().maxCoeff());

  std::vector<Vector> residuals(values.size());
  std::vector<double> sup_errors(values.size()), vt_errors(values.size());
  auto refresh_residuals = [&] {
    parallel_for(values.size(), threads, [&](std::size_t k) {
      residuals[k] = values[k] - result.interpolant.interpolate_function(values[k]);
      sup_errors[k] = residuals[k].cwiseAbs().maxCoeff();
      vt_errors[k] = linf_l2_norm(Eigen::Map<const Matrix>(residuals[k].data(), sigma_count, levels), tau);
    });
  };

  for (int n = 1; n <= iterations; ++n) {
    const auto start = std::chrono::steady_clock::now();
    refresh_residuals();
    const std::size_t selected = argmax_lowest(sup_errors);
    if (!(sup_errors[selected] > kExhausted * scale)) {
      report.status = "family exhausted";
      break;
    }
    EimIteration row;
    row.n = n;
    row.index = selected;
    row.mu = family.parameters[selected];
    row.sup_error = sup_errors[selected];
    row.sigma_hat = *std::max_element(vt_errors.begin(), vt_errors.end());
    row.theta = kNaN;
    row.eta_bar = kNaN;

    if (result.interpolant.append(residuals[selected]) < 0) {
      report.status = "family exhausted";
      break;
    }
    row.kappa = condition_number(result.interpolant);
    row.lambda_tilde = lebesgue_bound(result.interpolant);
    row.size = static_cast<int>(result.interpolant.size());
    row.seconds = seconds_since(start);
    report.rows.push_back(std::move(row));
  }

  refresh_residuals();
  report.final_sigma_hat = *std::max_element(vt_errors.begin(), vt_errors.end());
  return result;
}

}  // namespace mormor
