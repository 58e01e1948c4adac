#include "mormor/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

#include "mormor/errors.hpp"
#include "mormor/reduced_basis.hpp"

namespace mormor {

using detail::require;

TimeGrid::TimeGrid(double final_time, int steps)
    : final_time_(final_time), steps_(steps), tau_(0.0) {
  require(std::isfinite(final_time) && final_time > 0.0,
          "TimeGrid: final time must be positive");
  require(steps >= 0, "TimeGrid: number of steps must be non-negative");
  tau_ = steps == 0 ? final_time : final_time / steps;
}

TimeGrid TimeGrid::from_step_exponent(double final_time, int exponent) {
  require(exponent >= 0 && exponent < 31, "TimeGrid: step exponent out of range");
  const double steps = std::ldexp(final_time, exponent);
  const double rounded = std::round(steps);
  require(rounded >= 1.0 && std::abs(steps - rounded) <= 1e-12 * steps,
          "TimeGrid: final time is not a multiple of 2^-" + std::to_string(exponent));
  return TimeGrid(final_time, static_cast<int>(rounded));
}

double TimeGrid::node(int j) const {
  require(j >= 0 && j <= steps_, "TimeGrid: node index out of range");
  return j == steps_ && steps_ > 0 ? final_time_ : j * tau_;
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(node_count());
  for (int j = 0; j <= steps_; ++j) t[j] = node(j);
  return t;
}

bool TimeGrid::operator==(const TimeGrid& other) const {
  return steps_ == other.steps_ && final_time_ == other.final_time_;
}

Trajectory::Trajectory(TimeGrid grid, Matrix columns)
    : grid_(grid), columns_(std::move(columns)) {
  require(columns_.cols() == grid_.node_count(),
          "Trajectory: expected " + std::to_string(grid_.node_count()) +
              " columns, got " + std::to_string(columns_.cols()));
}

Trajectory Trajectory::zero(const TimeGrid& grid, Eigen::Index dim) {
  return Trajectory(grid, Matrix::Zero(dim, grid.node_count()));
}

Trajectory Trajectory::operator-(const Trajectory& other) const {
  require(grid_ == other.grid_ && dim() == other.dim(), "Trajectory: shape mismatch");
  return Trajectory(grid_, columns_ - other.columns_);
}

Trajectory Trajectory::operator+(const Trajectory& other) const {
  require(grid_ == other.grid_ && dim() == other.dim(), "Trajectory: shape mismatch");
  return Trajectory(grid_, columns_ + other.columns_);
}

Trajectory Trajectory::scaled(double factor) const {
  return Trajectory(grid_, factor * columns_);
}

struct InnerProduct::State {
  SparseMatrix gram;
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  SparseMatrix upper;  // L^T
};

InnerProduct::InnerProduct(const SparseMatrix& gram) {
  require(gram.rows() == gram.cols() && gram.rows() > 0 && gram.nonZeros() > 0,
          "InnerProduct: Gram matrix must be square and nonzero");
  auto state = std::make_shared<State>();
  state->gram = gram;
  state->gram.makeCompressed();

  const SparseMatrix transposed = state->gram.transpose();
  const double scale = state->gram.coeffs().cwiseAbs().maxCoeff();
  const double asym = SparseMatrix(state->gram - transposed).coeffs().cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * scale, "InnerProduct: Gram matrix is not symmetric");

  state->llt.compute(state->gram);
  require(state->llt.info() == Eigen::Success,
          "InnerProduct: Gram matrix is not positive definite");
  const SparseMatrix lower = state->llt.matrixL();
  state->upper = lower.transpose();
  state_ = std::move(state);
}

InnerProduct InnerProduct::identity(Eigen::Index dim) {
  SparseMatrix eye(dim, dim);
  eye.setIdentity();
  return InnerProduct(eye);
}

InnerProduct InnerProduct::from_dense(const Matrix& gram) {
  return InnerProduct(SparseMatrix(gram.sparseView()));
}

Eigen::Index InnerProduct::dim() const { return state_->gram.rows(); }

const SparseMatrix& InnerProduct::gram() const { return state_->gram; }

Vector InnerProduct::apply(const Vector& x) const { return state_->gram * x; }

Matrix InnerProduct::apply(const Matrix& x) const { return state_->gram * x; }

double InnerProduct::inner(const Vector& a, const Vector& b) const {
  return a.dot(state_->gram * b);
}

double InnerProduct::norm(const Vector& a) const {
  return std::sqrt(std::max(0.0, inner(a, a)));
}

Matrix InnerProduct::factor_apply(const Matrix& x) const {
  const Matrix permuted = state_->llt.permutationP() * x;
  return state_->upper * permuted;
}

Matrix InnerProduct::factor_solve(const Matrix& y) const {
  const Matrix z = state_->llt.matrixU().solve(y);
  return state_->llt.permutationPinv() * z;
}

Matrix InnerProduct::factor_transpose_solve(const Matrix& r) const {
  const Matrix permuted = state_->llt.permutationP() * r;
  return state_->llt.matrixL().solve(permuted);
}

Vector InnerProduct::riesz(const Vector& r) const { return state_->llt.solve(r); }

SparseMatrix InnerProduct::factor() const {
  return state_->upper * state_->llt.permutationP();
}

namespace {

void require_same_shape(const Trajectory& u, const Trajectory& v, const InnerProduct& ip) {
  require(u.grid() == v.grid(), "vt_inner: trajectories live on different time grids");
  require(u.dim() == v.dim() && u.dim() == ip.dim(),
          "vt_inner: dimension mismatch between trajectories and inner product");
}

// Orthonormal basis (Euclidean) of range(F a), truncated at rank.
Matrix weighted_orthonormal_range(const Matrix& a, const InnerProduct& ip, double rtol) {
  const Matrix fa = ip.factor_apply(a);
  Eigen::BDCSVD<Matrix> svd(fa, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  const double cutoff = s.size() > 0 ? rtol * s(0) : 0.0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

double vt_inner(const Trajectory& u, const Trajectory& v, const InnerProduct& ip) {
  require_same_shape(u, v, ip);
  const Matrix gv = ip.apply(v.columns());
  return u.grid().tau() * u.columns().cwiseProduct(gv).sum();
}

double vt_norm(const Trajectory& u, const InnerProduct& ip) {
  return std::sqrt(std::max(0.0, vt_inner(u, u, ip)));
}

Trajectory project_trajectory(const ReducedBasis& basis, const Trajectory& u,
                              const InnerProduct& ip) {
  require(basis.dim() == u.dim() && u.dim() == ip.dim(),
          "project_trajectory: dimension mismatch");
  if (basis.empty()) return Trajectory::zero(u.grid(), u.dim());
  const Matrix& b = basis.vectors();
  const Matrix gb = ip.apply(b);
  const Matrix defect = b.transpose() * gb - Matrix::Identity(b.cols(), b.cols());
  require(defect.cwiseAbs().maxCoeff() <= 1e-8,
          "project_trajectory: basis is not orthonormal under the given inner product");
  return Trajectory(u.grid(), b * (gb.transpose() * u.columns()));
}

double max_principal_angle(const Matrix& a, const Matrix& b, const InnerProduct& ip) {
  require(a.rows() == ip.dim() && b.rows() == ip.dim(),
          "max_principal_angle: dimension mismatch");
  const Matrix qa = weighted_orthonormal_range(a, ip, 1e-12);
  const Matrix qb = weighted_orthonormal_range(b, ip, 1e-12);
  if (qa.cols() != qb.cols()) return std::acos(0.0);
  if (qa.cols() == 0) return 0.0;
  const Matrix remainder = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Matrix> svd(remainder);
  const double sine = std::clamp(svd.singularValues()(0), 0.0, 1.0);
  return std::asin(sine);
}

Eigen::Index g_rank(const Matrix& a, const InnerProduct& ip, double rtol) {
  return weighted_orthonormal_range(a, ip, rtol).cols();
}

}  // namespace mormor
