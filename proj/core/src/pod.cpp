#include "mormor/pod.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mormor/errors.hpp"

namespace mormor {

using detail::require;

namespace {

constexpr double kRankCutoff = 1e-14;

// S = sqrt(tau) F R, the weighted snapshot matrix whose squared singular
// values are the eigenvalues of C_v.
Matrix weighted_snapshots(const Trajectory& v, const InnerProduct& ip) {
  require(v.dim() == ip.dim(), "pod: trajectory dimension does not match inner product");
  return std::sqrt(v.grid().tau()) * ip.factor_apply(v.columns());
}

// Extends `accepted` (orthonormal columns) by one unit vector orthogonal to
// it, trying `preferred` first and then the canonical basis.
Vector orthonormal_completion(const Matrix& accepted, const Vector& preferred) {
  const Eigen::Index n = preferred.size();
  auto try_candidate = [&](Vector w, Vector& out) {
    for (int pass = 0; pass < 2; ++pass) w -= accepted * (accepted.transpose() * w);
    const double norm = w.norm();
    if (norm > 0.5) {
      out = w / norm;
      return true;
    }
    return false;
  };
  Vector out;
  if (preferred.allFinite() && preferred.norm() > 0.0 &&
      try_candidate(preferred / preferred.norm(), out))
    return out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (try_candidate(Vector::Unit(n, i), out)) return out;
  }
  throw SolverError("pod_modes: could not complete an orthonormal mode set");
}

}  // namespace

bool CorrelationSpectrum::any_degenerate() const {
  return std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end();
}

std::size_t CorrelationSpectrum::rank() const {
  std::size_t r = 0;
  while (r < degenerate.size() && !degenerate[r]) ++r;
  return r;
}

Vector correlation_apply(const Trajectory& v, const Vector& w, const InnerProduct& ip) {
  require(v.dim() == ip.dim() && w.size() == ip.dim(),
          "correlation_apply: dimension mismatch");
  const Vector projections = v.columns().transpose() * ip.apply(w);
  return v.grid().tau() * (v.columns() * projections);
}

CorrelationSpectrum pod_modes(const Trajectory& v, const InnerProduct& ip, int m, double floor) {
  require(m >= 1, "pod_modes: m must be positive");
  require(m <= v.node_count(),
          "pod_modes: m = " + std::to_string(m) + " exceeds J+1 = " + std::to_string(v.node_count()));
  require(m <= v.dim(), "pod_modes: m exceeds dim(V)");

  const Matrix s = weighted_snapshots(v, ip);
  Eigen::BDCSVD<Matrix> svd(s, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();

  CorrelationSpectrum out;
  out.eigenvalues.resize(m);
  out.degenerate.resize(m);
  const double lead = sigma(0) * sigma(0);
  const double cutoff = kRankCutoff * std::max(lead, floor);

  Matrix left(s.rows(), m);
  for (int k = 0; k < m; ++k) {
    const double lambda = sigma(k) * sigma(k);
    const bool degenerate = !(lambda >= cutoff) || !(lambda > 0.0) || !std::isfinite(lambda);
    out.eigenvalues[k] = degenerate ? 0.0 : lambda;
    out.degenerate[k] = degenerate;
    if (!degenerate) {
      left.col(k) = svd.matrixU().col(k);
    } else {
      left.col(k) = orthonormal_completion(left.leftCols(k), svd.matrixU().col(k));
    }
  }

  out.modes = ip.factor_solve(left);
  for (int k = 0; k < m; ++k) {
    Eigen::Index pivot = 0;
    out.modes.col(k).cwiseAbs().maxCoeff(&pivot);
    if (out.modes(pivot, k) < 0.0) out.modes.col(k) *= -1.0;
  }

  for (int k = 0; k < m; ++k) {
    const Vector f = out.modes.col(k);
    const Vector residual = correlation_apply(v, f, ip) - out.eigenvalues[k] * f;
    out.max_eigen_residual = std::max(out.max_eigen_residual, ip.norm(residual));
  }
  return out;
}

std::vector<double> correlation_eigenvalues(const Trajectory& v, const InnerProduct& ip) {
  const Matrix s = weighted_snapshots(v, ip);
  Eigen::BDCSVD<Matrix> svd(s);
  const Vector& sigma = svd.singularValues();
  std::vector<double> lambda(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k) lambda[k] = sigma(k) * sigma(k);
  return lambda;
}

double spectrum_total(const Trajectory& v, const InnerProduct& ip) {
  double total = 0.0;
  for (double lambda : correlation_eigenvalues(v, ip)) total += lambda;
  return total;
}

}  // namespace mormor
