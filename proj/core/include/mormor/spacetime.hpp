#pragma once

// Discrete space-time space V_T = L^2(I; V) on a uniform time grid.
//
// A trajectory is stored as a dim(V) x (J+1) matrix whose j-th column holds
// the coefficients of the snapshot at t_j. Inner products on V are given by
// an SPD Gram matrix G with the factorization G = F^T F.

#include <memory>
#include <vector>

#include "mormor/types.hpp"

namespace mormor {

class ReducedBasis;

/// Uniform grid t_j = j * tau, j = 0..J, on [0, T].
class TimeGrid {
 public:
  /// J = 0 is a single node at t_0 = 0 carrying weight tau = T.
  TimeGrid(double final_time, int steps);

  /// Grid with tau = 2^-exponent on [0, T].
  static TimeGrid from_step_exponent(double final_time, int exponent);

  double final_time() const { return final_time_; }
  int steps() const { return steps_; }
  int node_count() const { return steps_ + 1; }
  double tau() const { return tau_; }
  double node(int j) const;
  std::vector<double> nodes() const;

  bool operator==(const TimeGrid& other) const;

 private:
  double final_time_;
  int steps_;
  double tau_;
};

/// Element of V_T: J+1 coefficient vectors of common dimension.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, Matrix columns);

  static Trajectory zero(const TimeGrid& grid, Eigen::Index dim);

  const TimeGrid& grid() const { return grid_; }
  Eigen::Index dim() const { return columns_.rows(); }
  int node_count() const { return grid_.node_count(); }

  const Matrix& columns() const { return columns_; }
  auto column(int j) const { return columns_.col(j); }

  Trajectory operator-(const Trajectory& other) const;
  Trajectory operator+(const Trajectory& other) const;
  Trajectory scaled(double factor) const;

 private:
  TimeGrid grid_;
  Matrix columns_;
};

/// Inner product on V defined by an SPD Gram matrix G = F^T F.
///
/// F is taken from a fill-reducing sparse Cholesky factorization
/// P G P^T = L L^T, i.e. F = L^T P. Cheap to copy; the factorization is
/// shared and immutable.
class InnerProduct {
 public:
  /// Throws ContractViolation if G is not square, not symmetric
  /// (max|G - G^T| > 1e-12 max|G|) or not positive definite.
  explicit InnerProduct(const SparseMatrix& gram);

  static InnerProduct identity(Eigen::Index dim);
  static InnerProduct from_dense(const Matrix& gram);

  Eigen::Index dim() const;
  const SparseMatrix& gram() const;

  Vector apply(const Vector& x) const;          // G x
  Matrix apply(const Matrix& x) const;          // G X
  double inner(const Vector& a, const Vector& b) const;
  double norm(const Vector& a) const;

  Matrix factor_apply(const Matrix& x) const;          // F X
  Matrix factor_solve(const Matrix& y) const;          // F^{-1} Y
  Matrix factor_transpose_solve(const Matrix& r) const;  // F^{-T} R
  Vector riesz(const Vector& r) const;                  // G^{-1} r

  /// F as an explicit sparse matrix (G = F^T F).
  SparseMatrix factor() const;

 private:
  struct State;
  std::shared_ptr<const State> state_;
};

/// <u, v>_{V_T} = sum_j tau <u^j, v^j>. Uniform weight tau on all J+1 nodes.
double vt_inner(const Trajectory& u, const Trajectory& v, const InnerProduct& ip);
double vt_norm(const Trajectory& u, const InnerProduct& ip);

/// Column-wise G-orthogonal projection onto span(basis). Throws
/// ContractViolation when basis^T G basis deviates from I by more than 1e-8
/// under `ip`.
Trajectory project_trajectory(const ReducedBasis& basis, const Trajectory& u,
                              const InnerProduct& ip);

/// Largest principal angle (radians) between span(a) and span(b) in the
/// G-inner product. Both spans must have the same dimension; column sets are
/// orthonormalized internally.
double max_principal_angle(const Matrix& a, const Matrix& b, const InnerProduct& ip);

/// Numerical rank of the columns of `a` in the G-inner product (relative
/// singular value cutoff `rtol`).
Eigen::Index g_rank(const Matrix& a, const InnerProduct& ip, double rtol = 1e-10);

}  // namespace mormor
