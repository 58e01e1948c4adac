#include "mormor/models.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "mormor/errors.hpp"
#include "mormor/parallel.hpp"

namespace mormor {

using detail::require;

std::vector<double> ParametricModel::estimate_all(const ReducedBasis&, int) const {
  throw ContractViolation("model '" + name() + "' has no error estimator");
}

std::optional<Trajectory> ParametricModel::solve_reduced(double, const ReducedBasis&) const {
  return std::nullopt;
}

DiffusionModel::DiffusionModel(int n_side, TimeGrid grid, std::vector<double> training,
                               ProblemData data)
    : ops_(std::make_shared<const AssembledOperators>(assemble(build_mesh(n_side), std::move(data)))),
      grid_(grid),
      training_(std::move(training)) {
  require(!training_.empty(), "DiffusionModel: training set is empty");
  for (double mu : training_) require(mu > 0.0, "DiffusionModel: parameters must be positive");
}

Trajectory DiffusionModel::solve(double mu) const { return solve_full(*ops_, mu, grid_); }

std::optional<Trajectory> DiffusionModel::solve_reduced(double mu, const ReducedBasis& basis) const {
  if (basis.empty()) return Trajectory::zero(grid_, ops_->dim());
  return mormor::solve_reduced(*ops_, basis, mu, grid_);
}

double DiffusionModel::estimate(double mu, const ReducedBasis& basis) const {
  const Trajectory reduced = *solve_reduced(mu, basis);
  return estimator_delta(*ops_, basis, mu, grid_, reduced);
}

std::vector<double> DiffusionModel::estimate_all(const ReducedBasis& basis, int threads) const {
  std::vector<double> out(training_.size());
  if (basis.empty()) {
    const Trajectory zero = Trajectory::zero(grid_, ops_->dim());
    parallel_for(training_.size(), threads, [&](std::size_t k) {
      out[k] = estimator_delta(*ops_, basis, training_[k], grid_, zero);
    });
    return out;
  }
  const ReducedOperators reduced = project_operators(*ops_, basis, grid_);
  parallel_for(training_.size(), threads, [&](std::size_t k) {
    const Trajectory u = mormor::solve_reduced(reduced, training_[k]);
    out[k] = estimator_delta(*ops_, basis, training_[k], grid_, u);
  });
  return out;
}

std::vector<double> equidistant(double lo, double hi, int count) {
  require(count >= 1, "equidistant: count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

std::unique_ptr<DiffusionModel> diffusion_model(int n_side, int tau_exponent, int param_count) {
  return std::make_unique<DiffusionModel>(n_side, TimeGrid::from_step_exponent(1.0, tau_exponent),
                                          equidistant(1.0, 2.0, param_count));
}

SequenceModel::SequenceModel(double alpha, double lambda, int dimension, TimeGrid grid)
    : alpha_(alpha),
      lambda_(lambda),
      dimension_(dimension),
      grid_(grid),
      ip_(InnerProduct::identity(dimension)) {
  require(alpha > 0.0 && lambda > 0.0, "SequenceModel: alpha and lambda must be positive");
  require(dimension >= 1, "SequenceModel: dimension must be positive");
  training_.resize(static_cast<std::size_t>(dimension));
  for (int i = 0; i < dimension; ++i) training_[i] = i + 1;
}

double SequenceModel::amplitude(int i) const {
  require(i >= 1, "SequenceModel::amplitude: index is 1-based");
  const int k = std::bit_width(static_cast<unsigned>(i));
  return std::exp2(-k * alpha_);
}

double SequenceModel::time_factor() const {
  double sum = 0.0;
  for (int j = 0; j < grid_.node_count(); ++j) sum += std::exp(-2.0 * lambda_ * grid_.node(j));
  return std::sqrt(grid_.tau() * sum);
}

Trajectory SequenceModel::solve(double mu) const {
  const int i = static_cast<int>(std::lround(mu));
  require(i >= 1 && i <= dimension_ && std::abs(mu - i) < 1e-9,
          "SequenceModel::solve: parameter must be an index in 1..D");
  Matrix columns = Matrix::Zero(dimension_, grid_.node_count());
  const double x = amplitude(i);
  for (int j = 0; j < grid_.node_count(); ++j)
    columns(i - 1, j) = std::exp(-lambda_ * grid_.node(j)) * x;
  return Trajectory(grid_, std::move(columns));
}

std::unique_ptr<SequenceModel> sequence_model(double alpha, double lambda, int dimension,
                                              TimeGrid grid) {
  return std::make_unique<SequenceModel>(alpha, lambda, dimension, grid);
}

FunctionFamily inverse_distance_family(int levels, int sigma_count, int param_side) {
  require(levels >= 2, "inverse_distance_family: need at least two time levels");
  require(sigma_count >= 2 && param_side >= 1, "inverse_distance_family: invalid sizes");
  FunctionFamily family{TimeGrid(1.0, levels - 1), equidistant(0.0, 1.0, sigma_count), {}, {}};
  const std::vector<double> side = equidistant(0.0, 1.0, param_side);
  for (double mu2 : side)
    for (double mu1 : side) family.parameters.push_back({mu1, mu2});
  family.evaluator = [](const std::vector<double>& mu, double t, double x) {
    const double dx = x - mu[0];
    const double dt = t - mu[1];
    return 1.0 / std::sqrt(dx * dx + dt * dt + 1.0);
  };
  return family;
}

}  // namespace mormor
