#include <doctest.h>

#include <cmath>

#include "mormor/errors.hpp"
#include "mormor/models.hpp"
#include "oracles.hpp"

using namespace mormor;
using mormor::testing::close;

TEST_SUITE("sequence model") {
  TEST_CASE("amplitudes are exact powers of two") {
    const SequenceModel model(1.0, 1.0, 16, TimeGrid(1.0, 32));
    CHECK(model.amplitude(1) == 0.5);
    CHECK(model.amplitude(2) == 0.25);
    CHECK(model.amplitude(3) == 0.25);
    for (int i = 4; i <= 7; ++i) CHECK(model.amplitude(i) == 0.125);
    CHECK(model.amplitude(8) == 0.0625);
    const SequenceModel steep(2.0, 1.0, 8, TimeGrid(1.0, 32));
    CHECK(steep.amplitude(2) == 1.0 / 16.0);
  }

  TEST_CASE("trajectory norms and structure") {
    const TimeGrid grid(1.0, 32);
    const SequenceModel model(1.0, 2.0, 10, grid);
    double c2 = 0.0;
    for (double t : grid.nodes()) c2 += grid.tau() * std::exp(-4.0 * t);
    CHECK(close(model.time_factor(), std::sqrt(c2), 1e-15));
    for (int i = 1; i <= 10; ++i) {
      const Trajectory u = model.solve(i);
      const double norm = vt_norm(u, model.inner_product());
      CHECK(close(norm * norm, c2 * model.amplitude(i) * model.amplitude(i), 1e-13));
      Matrix others = Matrix::Identity(10, 10).leftCols(i - 1);
      CHECK((others.transpose() * u.columns()).isZero(0.0));
      CHECK(u.columns()(i - 1, 3) == std::exp(-2.0 * grid.node(3)) * model.amplitude(i));
    }
    CHECK(model.training_set().size() == 10);
    CHECK(model.training_set().front() == 1.0);
  }

  TEST_CASE("invalid parameters") {
    const SequenceModel model(1.0, 1.0, 4, TimeGrid(1.0, 4));
    CHECK_THROWS_AS(model.solve(0.0), ContractViolation);
    CHECK_THROWS_AS(model.solve(5.0), ContractViolation);
    CHECK_THROWS_AS(model.solve(1.5), ContractViolation);
  }
}

TEST_SUITE("diffusion model") {
  TEST_CASE("training set and grid") {
    auto model = diffusion_model(9, 5, 6);
    CHECK(model->training_set() == equidistant(1.0, 2.0, 6));
    CHECK(model->training_set().back() == 2.0);
    CHECK(model->grid().steps() == 32);
    CHECK(model->has_estimator());
    auto single = diffusion_model(9, 5, 1);
    CHECK(single->training_set() == std::vector<double>{1.0});
  }

  TEST_CASE("mu = 1 equals the constant-coefficient solve") {
    auto model = diffusion_model(9, 4, 2);
    const Trajectory u = model->solve(1.0);
    const AssembledOperators& ops = model->operators();
    const SparseMatrix k = assemble_stiffness(ops.mesh(), [](double, double) { return 1.0; });
    const TimeGrid& grid = model->grid();
    const SparseMatrix system = SparseMatrix(ops.mass()) / grid.tau() + k;
    const Eigen::SimplicialLLT<SparseMatrix> llt(system);
    Vector c = ops.initial();
    CHECK((u.columns().col(0) - c).norm() <= 1e-13 * c.norm());
    for (int j = 1; j <= grid.steps(); ++j) {
      c = llt.solve(ops.mass() * c / grid.tau() + ops.load(grid.node(j)));
      CHECK((u.columns().col(j) - c).norm() <= 1e-11 * c.norm());
    }
  }

  TEST_CASE("solves are deterministic") {
    auto a = diffusion_model(9, 4, 3);
    auto b = diffusion_model(9, 4, 3);
    CHECK(a->solve(1.5).columns() == b->solve(1.5).columns());
    const ReducedBasis basis = ReducedBasis::from_span(a->inner_product(), a->solve(1.0).columns().leftCols(2));
    CHECK(a->estimate_all(basis, 1) == a->estimate_all(basis, 4));
  }

  TEST_CASE("empty basis: reduced solution is zero") {
    auto model = diffusion_model(7, 3, 2);
    const auto r = model->solve_reduced(1.0, ReducedBasis(model->inner_product(), model->operators().dim()));
    REQUIRE(r.has_value());
    CHECK(r->columns().isZero(0.0));
  }
}

TEST_SUITE("inverse-distance family") {
  TEST_CASE("formula examples") {
    const FunctionFamily family = inverse_distance_family(4, 5, 2);
    CHECK(family.evaluator({0.0, 0.0}, 0.0, 0.0) == 1.0);
    CHECK(family.evaluator({1.0, 1.0}, 1.0, 1.0) == 1.0);
    CHECK(close(family.evaluator({0.0, 0.0}, 0.0, 1.0), 0.7071067811865476, 1e-15));
  }

  TEST_CASE("values in (0, 1] and Lipschitz in mu") {
    const FunctionFamily family = inverse_distance_family(16, 20, 5);
    double lipschitz = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
      const Matrix v = family.values(k);
      CHECK(v.minCoeff() > 0.0);
      CHECK(v.maxCoeff() <= 1.0);
      const double d = 1e-6;
      std::vector<double> shifted = family.parameters[k];
      shifted[0] += d;
      double worst = 0.0;
      for (int j = 0; j < family.grid.node_count(); ++j)
        for (double x : family.points)
          worst = std::max(worst, std::abs(family.evaluator(shifted, family.grid.node(j), x) -
                                           family.evaluator(family.parameters[k], family.grid.node(j), x)));
      lipschitz = std::max(lipschitz, worst / d);
    }
    MESSAGE("observed Lipschitz constant in mu_1: " << lipschitz);
    CHECK(lipschitz <= 1.0);
  }

  TEST_CASE("parameter ordering: mu_1 varies fastest") {
    const FunctionFamily family = inverse_distance_family(4, 5, 3);
    CHECK(family.parameters[1] == std::vector<double>{0.5, 0.0});
    CHECK(family.parameters[3] == std::vector<double>{0.0, 0.5});
  }

  TEST_CASE("equidistant points") {
    CHECK(equidistant(0.0, 1.0, 1) == std::vector<double>{0.0});
    const auto p = equidistant(1.0, 2.0, 5);
    CHECK(p[2] == 1.5);
    CHECK(p.back() == 2.0);
  }
}
