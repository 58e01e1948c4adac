#include "mormor/reduced_basis.hpp"

#include <cmath>

#include "mormor/errors.hpp"

namespace mormor {

using detail::require;

ReducedBasis::ReducedBasis(InnerProduct ip, Eigen::Index dim)
    : ip_(std::move(ip)), vectors_(dim, 0), gram_vectors_(dim, 0) {
  require(dim == ip_.dim(), "ReducedBasis: dimension does not match inner product");
}

ReducedBasis::ReducedBasis(InnerProduct ip, Matrix vectors, Matrix gram_vectors)
    : ip_(std::move(ip)), vectors_(std::move(vectors)), gram_vectors_(std::move(gram_vectors)) {}

ReducedBasis ReducedBasis::from_orthonormal(InnerProduct ip, Matrix vectors) {
  require(vectors.rows() == ip.dim(), "ReducedBasis: dimension does not match inner product");
  Matrix gram_vectors = ip.apply(vectors);
  ReducedBasis basis(std::move(ip), std::move(vectors), std::move(gram_vectors));
  require(basis.orthonormality_defect() <= 1e-8, "ReducedBasis: vectors are not G-orthonormal");
  return basis;
}

ReducedBasis ReducedBasis::from_span(InnerProduct ip, const Matrix& vectors) {
  ReducedBasis basis(std::move(ip), vectors.rows());
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) basis.append(vectors.col(k));
  return basis;
}

bool ReducedBasis::append(const Vector& v, double drop_tol) {
  require(v.size() == dim(), "ReducedBasis::append: dimension mismatch");
  const double original = ip_.norm(v);
  if (!(original > 0.0)) return false;

  Vector w = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index k = 0; k < size(); ++k) {
      w -= gram_vectors_.col(k).dot(w) * vectors_.col(k);
    }
  }
  Vector gw = ip_.apply(w);
  const double remainder = std::sqrt(std::max(0.0, w.dot(gw)));
  if (!(remainder > drop_tol * original)) return false;

  vectors_.conservativeResize(Eigen::NoChange, size() + 1);
  gram_vectors_.conservativeResize(Eigen::NoChange, gram_vectors_.cols() + 1);
  vectors_.col(size() - 1) = w / remainder;
  gram_vectors_.col(gram_vectors_.cols() - 1) = gw / remainder;
  return true;
}

Vector ReducedBasis::coefficients(const Vector& x) const {
  require(x.size() == dim(), "ReducedBasis::coefficients: dimension mismatch");
  return gram_vectors_.transpose() * x;
}

Matrix ReducedBasis::coefficients(const Matrix& x) const {
  require(x.rows() == dim(), "ReducedBasis::coefficients: dimension mismatch");
  return gram_vectors_.transpose() * x;
}

Vector ReducedBasis::project(const Vector& x) const { return vectors_ * coefficients(x); }

Matrix ReducedBasis::project(const Matrix& x) const { return vectors_ * coefficients(x); }

double ReducedBasis::orthonormality_defect() const {
  if (empty()) return 0.0;
  const Matrix defect = vectors_.transpose() * gram_vectors_ - Matrix::Identity(size(), size());
  return defect.cwiseAbs().maxCoeff();
}

ReducedBasis ReducedBasis::truncated(Eigen::Index k) const {
  require(k >= 0 && k <= size(), "ReducedBasis::truncated: size out of range");
  return ReducedBasis(ip_, vectors_.leftCols(k), gram_vectors_.leftCols(k));
}

}  // namespace mormor
