#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mormor {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

}  // namespace mormor
