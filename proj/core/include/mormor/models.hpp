#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mormor/eim.hpp"
#include "mormor/fem.hpp"
#include "mormor/reduced_basis.hpp"
#include "mormor/spacetime.hpp"

namespace mormor {

/// A parametrized family of space-time trajectories u_mu in V_T over a finite
/// training set. solve() must be deterministic.
class ParametricModel {
 public:
  virtual ~ParametricModel() = default;

  virtual std::string name() const = 0;
  virtual const TimeGrid& grid() const = 0;
  virtual const InnerProduct& inner_product() const = 0;
  virtual const std::vector<double>& training_set() const = 0;

  virtual Trajectory solve(double mu) const = 0;

  virtual bool has_estimator() const { return false; }
  /// A posteriori estimate of the reduced-model error for every training
  /// parameter, against `basis` (which may be empty).
  virtual std::vector<double> estimate_all(const ReducedBasis& basis, int threads) const;
  /// Reduced (online) solution, when the model has one.
  virtual std::optional<Trajectory> solve_reduced(double mu, const ReducedBasis& basis) const;
};

/// Parabolic diffusion with a_mu = mu 1_{Omega_1} + 1_{Omega_2} on (-1,1)^2.
/// V is H^1_0 with the full H^1 Gram matrix; the estimator is Delta_n.
class DiffusionModel final : public ParametricModel {
 public:
  DiffusionModel(int n_side, TimeGrid grid, std::vector<double> training,
                 ProblemData data = ProblemData::benchmark());

  std::string name() const override { return "diffusion"; }
  const TimeGrid& grid() const override { return grid_; }
  const InnerProduct& inner_product() const override { return ops_->h1(); }
  const std::vector<double>& training_set() const override { return training_; }

  Trajectory solve(double mu) const override;

  bool has_estimator() const override { return true; }
  std::vector<double> estimate_all(const ReducedBasis& basis, int threads) const override;
  std::optional<Trajectory> solve_reduced(double mu, const ReducedBasis& basis) const override;

  double estimate(double mu, const ReducedBasis& basis) const;
  const AssembledOperators& operators() const { return *ops_; }

 private:
  std::shared_ptr<const AssembledOperators> ops_;
  TimeGrid grid_;
  std::vector<double> training_;
};

/// `count` equidistant points in [lo, hi] (a single point sits at lo).
std::vector<double> equidistant(double lo, double hi, int count);

/// Diffusion model on n_side^2 vertices with tau = 2^-tau_exponent on
/// [0, 1] and param_count equidistant parameters in [1, 2].
std::unique_ptr<DiffusionModel> diffusion_model(int n_side, int tau_exponent, int param_count);

/// Orthogonal sequence model in V = R^D (identity Gram):
///   u_i = (e^{-lambda t_0} x_i e_i, ..., e^{-lambda t_J} x_i e_i),
///   x_i = 2^{-k alpha} for 2^{k-1} <= i <= 2^k - 1,
/// with training set {1, ..., D}. Parameters are the (1-based) indices.
class SequenceModel final : public ParametricModel {
 public:
  SequenceModel(double alpha, double lambda, int dimension, TimeGrid grid);

  std::string name() const override { return "sequence"; }
  const TimeGrid& grid() const override { return grid_; }
  const InnerProduct& inner_product() const override { return ip_; }
  const std::vector<double>& training_set() const override { return training_; }

  Trajectory solve(double mu) const override;

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  int dimension() const { return dimension_; }
  /// x_i, 1-based.
  double amplitude(int i) const;
  /// sqrt(tau sum_j e^{-2 lambda t_j}): ||u_i||_{V_T} = time_factor() * x_i.
  double time_factor() const;

 private:
  double alpha_;
  double lambda_;
  int dimension_;
  TimeGrid grid_;
  InnerProduct ip_;
  std::vector<double> training_;
};

/// Defaults: D = 2 * n_max, T = 1, J = 32.
std::unique_ptr<SequenceModel> sequence_model(double alpha, double lambda, int dimension,
                                              TimeGrid grid);

/// a_mu(t)(x) = 1 / sqrt((x - mu_1)^2 + (t - mu_2)^2 + 1) on I = Omega = (0,1),
/// sampled on `levels` time nodes (J = levels - 1), `sigma_count`
/// equidistant points x_i = (i-1)/(sigma_count-1), and the
/// param_side x param_side tensor grid of parameters in [0,1]^2.
FunctionFamily inverse_distance_family(int levels, int sigma_count, int param_side);

}  // namespace mormor
