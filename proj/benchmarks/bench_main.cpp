#include <benchmark/benchmark.h>

#include <random>

#include "mormor/eim.hpp"
#include "mormor/fem.hpp"
#include "mormor/models.hpp"
#include "mormor/pod.hpp"

namespace {

using namespace mormor;

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = dist(engine);
  return out;
}

void BM_PodModes(benchmark::State& state) {
  const int n_side = static_cast<int>(state.range(0));
  const AssembledOperators ops = assemble(build_mesh(n_side));
  const TimeGrid grid = TimeGrid::from_step_exponent(1.0, 7);
  const Trajectory v(grid, random_matrix(ops.dim(), grid.node_count(), 7));
  for (auto _ : state) benchmark::DoNotOptimize(pod_modes(v, ops.h1(), 4));
  state.SetLabel(std::to_string(ops.dim()) + " dofs, 129 snapshots");
}
BENCHMARK(BM_PodModes)->Arg(17)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_SolveFull(benchmark::State& state) {
  const int n_side = static_cast<int>(state.range(0));
  const AssembledOperators ops = assemble(build_mesh(n_side));
  const TimeGrid grid = TimeGrid::from_step_exponent(1.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_full(ops, 1.5, grid));
  state.SetLabel(std::to_string(ops.dim()) + " dofs, 128 steps");
}
BENCHMARK(BM_SolveFull)->Arg(17)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_SolveReduced(benchmark::State& state) {
  auto model = diffusion_model(33, 7, 2);
  const Trajectory u = model->solve(1.0);
  const ReducedBasis basis =
      ReducedBasis::from_span(model->inner_product(), u.columns().leftCols(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model->solve_reduced(1.7, basis));
  state.SetLabel("N = " + std::to_string(basis.size()));
}
BENCHMARK(BM_SolveReduced)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_EimPodGreedy(benchmark::State& state) {
  const FunctionFamily family = inverse_distance_family(128, 100, 10);
  const int iterations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eim_pod_greedy(family, iterations, 1));
  state.SetLabel(std::to_string(iterations) + " iterations");
}
BENCHMARK(BM_EimPodGreedy)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
