#pragma once

#include <vector>

#include "mormor/spacetime.hpp"

namespace mormor {

/// Leading eigen-pairs of the correlation operator C_v.
struct CorrelationSpectrum {
  std::vector<double> eigenvalues;  // non-increasing, >= 0
  Matrix modes;                     // dim(V) x m, G-orthonormal
  std::vector<bool> degenerate;     // per mode: eigenvalue below the rank cutoff
  double max_eigen_residual = 0.0;  // max_k ||C_v f_k - lambda_k f_k||_G

  std::size_t size() const { return eigenvalues.size(); }
  bool any_degenerate() const;
  /// Number of leading modes that are not degenerate.
  std::size_t rank() const;
};

/// C_v(w) = sum_j tau <v^j, w> v^j.
Vector correlation_apply(const Trajectory& v, const Vector& w, const InnerProduct& ip);

/// The m leading eigen-pairs of C_v, from the thin SVD of sqrt(tau) F R.
///
/// Eigenvalues below 1e-14 * max(lambda_1, floor) are set to exactly 0 and
/// their modes (an arbitrary G-orthonormal completion) are flagged
/// degenerate. floor = 0 gives a purely relative cutoff.
/// Each mode's entry of largest magnitude is positive.
/// Throws ContractViolation when m < 1, m > J+1 or m > dim(V).
CorrelationSpectrum pod_modes(const Trajectory& v, const InnerProduct& ip, int m,
                              double floor = 1.0);

/// Sum of all eigenvalues of C_v, taken from the singular values of
/// sqrt(tau) F R. Equals ||v||^2_{V_T}.
double spectrum_total(const Trajectory& v, const InnerProduct& ip);

/// All eigenvalues of C_v (length min(dim, J+1)), non-increasing.
std::vector<double> correlation_eigenvalues(const Trajectory& v, const InnerProduct& ip);

}  // namespace mormor
