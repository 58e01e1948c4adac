#pragma once

#include "mormor/spacetime.hpp"

namespace mormor {

/// Ordered G-orthonormal basis of a reduced subspace V_N of V.
///
/// Keeps G*B alongside B so projections cost one dense product.
class ReducedBasis {
 public:
  ReducedBasis(InnerProduct ip, Eigen::Index dim);

  /// Wraps already orthonormal columns. Throws ContractViolation when
  /// max|B^T G B - I| > 1e-8.
  static ReducedBasis from_orthonormal(InnerProduct ip, Matrix vectors);

  /// Orthonormalizes arbitrary columns with modified Gram-Schmidt (one
  /// reorthogonalization pass); dependent columns are dropped.
  static ReducedBasis from_span(InnerProduct ip, const Matrix& vectors);

  Eigen::Index size() const { return vectors_.cols(); }
  Eigen::Index dim() const { return vectors_.rows(); }
  bool empty() const { return size() == 0; }

  const InnerProduct& inner_product() const { return ip_; }
  const Matrix& vectors() const { return vectors_; }
  const Matrix& gram_vectors() const { return gram_vectors_; }

  /// Appends v after modified Gram-Schmidt with one reorthogonalization
  /// pass. Returns false (and leaves the basis unchanged) when the
  /// orthogonal remainder is below `drop_tol` times ||v||.
  bool append(const Vector& v, double drop_tol = 1e-10);

  /// B^T G x.
  Vector coefficients(const Vector& x) const;
  Matrix coefficients(const Matrix& x) const;
  /// B (B^T G x).
  Vector project(const Vector& x) const;
  Matrix project(const Matrix& x) const;

  /// max |B^T G B - I|, measured under the basis' own inner product.
  double orthonormality_defect() const;

  /// Leading k vectors as a new basis.
  ReducedBasis truncated(Eigen::Index k) const;

 private:
  ReducedBasis(InnerProduct ip, Matrix vectors, Matrix gram_vectors);

  InnerProduct ip_;
  Matrix vectors_;
  Matrix gram_vectors_;
};

}  // namespace mormor
