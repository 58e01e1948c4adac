#pragma once

// Weak POD-Greedy: per iteration pick the worst-approximated trajectory
// (exact projection error or an a posteriori estimator), and append the m
// leading POD modes of its projection residual to the reduced basis.

#include <iosfwd>
#include <string>
#include <vector>

#include "mormor/models.hpp"
#include "mormor/pod.hpp"
#include "mormor/reduced_basis.hpp"

namespace mormor {

enum class Selection { ExactError, Estimator };

std::string to_string(Selection selection);
Selection selection_from_string(const std::string& text);

struct GreedyConfig {
  int max_iterations = 20;
  int modes = 1;
  Selection selection = Selection::ExactError;
  /// Stop before adding modes once the surrogate (sigma or Delta) is below.
  double tolerance = 0.0;
  /// In estimator mode, also solve every training parameter and report the
  /// exact sigma_n and gamma_eff.
  bool track_exact_error = true;
  /// Record e_n = ||u_{mu_n} - u_{N,mu_n}||_{V_T} when the model has a
  /// reduced solver.
  bool track_reduced_error = true;
  int threads = 0;
};

struct GreedyIteration {
  int n = 0;
  double mu = 0.0;
  std::size_t index = 0;       // position of mu in the training set
  double sigma = 0.0;          // sup_mu ||u - P_{V_{T,n-1}} u||_{V_T} (NaN if untracked)
  double delta_sup = 0.0;      // max_mu Delta_{n-1}(mu) (NaN in exact-error mode)
  std::vector<double> lambdas; // lambda_n^1..lambda_n^m
  double theta = 0.0;          // lambda_n^m / lambda_n^1
  double gamma_eff = 0.0;      // ||r_n||_{V_T} / sigma_n
  double residual_norm = 0.0;  // ||r_n||_{V_T}
  double reduced_error = 0.0;  // e_n (NaN if untracked)
  double seconds = 0.0;
  int basis_size = 0;          // N after this iteration
  int dropped_modes = 0;
  double mode_coupling = 0.0;  // max |f_n^k^T G b| over prior basis vectors
};

struct GreedyReport {
  int modes = 1;
  Selection selection = Selection::ExactError;
  std::string model;
  std::string status = "completed";  // completed | converged | manifold exhausted
  std::vector<GreedyIteration> rows;
  double final_sigma = 0.0;  // sup error against the final basis (NaN if untracked)
  std::vector<std::string> warnings;
};

struct GreedyResult {
  ReducedBasis basis;
  GreedyReport report;
  /// Raw POD modes of each iteration's residual (before re-orthonormalization).
  std::vector<Matrix> modes;
};

/// Full trajectories of a model's training set, solved once.
class SnapshotCache {
 public:
  SnapshotCache(const ParametricModel& model, int threads = 0);

  std::size_t size() const { return trajectories_.size(); }
  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
  const std::vector<Trajectory>& trajectories() const { return trajectories_; }
  const std::vector<double>& parameters() const { return parameters_; }

 private:
  std::vector<double> parameters_;
  std::vector<Trajectory> trajectories_;
};

struct SigmaResult {
  double value = 0.0;
  std::size_t index = 0;
  double mu = 0.0;
};

/// max over the cached training set of ||u - P u||_{V_T}; ties go to the
/// lowest index.
SigmaResult exact_sigma(const SnapshotCache& cache, const ReducedBasis& basis, int threads = 0);
SigmaResult exact_sigma(const ParametricModel& model, const ReducedBasis& basis, int threads = 0);

/// Singular values of the G-weighted global snapshot matrix
/// sqrt(tau) F [R_1 ... R_P]: a lower-bound proxy for Kolmogorov widths.
std::vector<double> width_proxy(const std::vector<Trajectory>& snapshots, const InnerProduct& ip);

/// Runs the weak POD-Greedy loop. Throws ContractViolation for an invalid
/// config (modes < 1, empty training set, estimator mode without an
/// estimator) and propagates SolverError from model solves.
GreedyResult pod_greedy(const ParametricModel& model, const GreedyConfig& config);

/// CSV columns: n,mu,sigma,delta_sup,lambda_1..lambda_m,theta,gamma_eff,seconds.
/// With `timings` false the seconds column is written as 0 so the file is
/// byte-reproducible.
void write_report_csv(std::ostream& out, const GreedyReport& report, bool timings = false);
void write_report_json(std::ostream& out, const GreedyReport& report);

}  // namespace mormor
