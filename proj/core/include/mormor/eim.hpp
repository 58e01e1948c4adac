#pragma once

// Empirical interpolation on a finite candidate set Sigma.
//
// eim_pod_greedy compresses each selected function in time by POD and runs
// the EIM point selection on its leading temporal modes; classical_eim_2d is
// the plain EIM on the joint (t, x) grid, kept as a baseline.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mormor/spacetime.hpp"

namespace mormor {

/// Parametrized functions a_mu(t)(x) sampled on a time grid and on the
/// candidate points Sigma.
struct FunctionFamily {
  using Evaluator = std::function<double(const std::vector<double>& mu, double t, double x)>;

  TimeGrid grid;
  std::vector<double> points;                   // Sigma
  std::vector<std::vector<double>> parameters;  // the training set P-hat
  Evaluator evaluator;

  std::size_t size() const { return parameters.size(); }
  /// Value matrix (a_mu(t_j)(x_i)), |Sigma| x (J+1).
  Matrix values(std::size_t k) const;
};

/// Interpolant Pi g = (q_1 .. q_n) B^{-1} (g(x_1) .. g(x_n))^T with B unit
/// lower triangular, B_ij = q_j(x_i).
class EimInterpolant {
 public:
  explicit EimInterpolant(Eigen::Index candidate_count);

  Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }
  Eigen::Index candidate_count() const { return basis_.rows(); }
  bool empty() const { return points_.empty(); }

  const std::vector<Eigen::Index>& points() const { return points_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }

  /// c = B^{-1} values (forward substitution).
  Vector coefficients(const Vector& values_at_points) const;
  /// sum_j c_j q_j on Sigma. Throws ContractViolation on a size mismatch.
  Vector interpolate(const Vector& values_at_points) const;
  /// Pi g for g sampled on Sigma.
  Vector interpolate_function(const Vector& g) const;
  /// Pi applied to every column.
  Matrix interpolate_columns(const Matrix& g) const;

  /// Adds the magic point argmax_x |r(x)| (lowest index on ties) and
  /// q = r / r(x). r is taken as exactly zero at the existing points.
  /// Returns the new point, or -1 when r vanishes on Sigma.
  Eigen::Index append(const Vector& residual);

  /// Leading k points and basis functions (B's leading block).
  EimInterpolant truncated(Eigen::Index k) const;

 private:
  std::vector<Eigen::Index> points_;
  Matrix basis_;   // |Sigma| x n
  Matrix matrix_;  // n x n
};

Vector interpolate(const EimInterpolant& itp, const Vector& values_at_points);

/// sup_x sum_i |w_i(x)| over Sigma, with cardinal functions
/// (w_1 .. w_n) = (q_1 .. q_n) B^{-1}.
double lebesgue_bound(const EimInterpolant& itp);

/// l2 condition number of B.
double condition_number(const EimInterpolant& itp);

/// Discrete L^2(I; l_inf(Sigma)) norm: sqrt(sum_j tau (max_i |a_ij|)^2).
double linf_l2_norm(const Matrix& values, double tau);

/// sqrt(tau sum_j |a_mu(t_j)(x_n) - Pi_{n-1} a_mu(t_j)(x_n)|^2) for the most
/// recent magic point x_n.
double eim_estimator(const EimInterpolant& itp, const FunctionFamily& family, std::size_t index);

struct EimIteration {
  int n = 0;
  std::size_t index = 0;
  std::vector<double> mu;
  double sigma_hat = 0.0;        // sup_mu ||a_mu - Pi_{T,n-1} a_mu||, L^2(I; l_inf)
  double sup_error = 0.0;        // sup over I x Sigma (classical EIM)
  std::vector<double> lambdas;   // POD eigenvalues of the residual
  double theta = 0.0;
  double kappa = 0.0;
  double lambda_tilde = 0.0;
  double eta_bar = 0.0;          // mean effectivity of the point estimator
  double seconds = 0.0;
  int size = 0;                  // interpolant size after this iteration
  int skipped_modes = 0;
};

struct EimReport {
  std::string method;  // eim-pod-greedy | eim-classical
  int modes = 1;
  std::string status = "completed";  // completed | family exhausted
  std::vector<EimIteration> rows;
  double final_sigma_hat = 0.0;
  std::vector<std::string> warnings;
};

struct EimResult {
  EimInterpolant interpolant;
  EimReport report;
  std::vector<Matrix> modes;  // POD modes (on Sigma) of each iteration
};

/// Requires |Sigma| >= m * iterations and a nonempty family.
EimResult eim_pod_greedy(const FunctionFamily& family, int iterations, int modes, int threads = 0);

/// Classical EIM on the |Sigma| * (J+1) space-time candidates; candidate
/// index i + j |Sigma| is the point (t_j, x_i).
EimResult classical_eim_2d(const FunctionFamily& family, int iterations, int threads = 0);

/// eim-pod-greedy: n,mu1,mu2,sigma_hat,theta,kappa,lambda_tilde,eta_bar,seconds
/// eim-classical:  n,mu1,mu2,sigma_hat,sup_error,kappa,lambda_tilde,seconds
void write_eim_report_csv(std::ostream& out, const EimReport& report, bool timings = false);
void write_eim_report_json(std::ostream& out, const EimReport& report);

/// Magic-point coordinates, B (row-major) and the q basis sampled on Sigma.
void write_interpolant_json(std::ostream& out, const EimInterpolant& itp,
                            const std::function<std::vector<double>(Eigen::Index)>& coordinates);

}  // namespace mormor
