#include "mormor/fem.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/SparseExtra>

#include "mormor/errors.hpp"

namespace mormor {

using detail::require;

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct ElementGeometry {
  double area;
  std::array<std::array<double, 2>, 3> grad;
};

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.vertices[tri[0]];
  const auto& p1 = mesh.vertices[tri[1]];
  const auto& p2 = mesh.vertices[tri[2]];
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  ElementGeometry g{0.5 * std::abs(det), {}};
  const std::array<const std::array<double, 2>*, 3> p = {&p0, &p1, &p2};
  for (int i = 0; i < 3; ++i) {
    const auto& a = *p[(i + 1) % 3];
    const auto& b = *p[(i + 2) % 3];
    g.grad[i] = {(a[1] - b[1]) / det, (b[0] - a[0]) / det};
  }
  return g;
}

// Selection of interior rows out of all vertices.
SparseMatrix interior_selection(const Mesh& mesh) {
  SparseMatrix select(mesh.dof_count(), mesh.vertex_count());
  Triplets entries;
  entries.reserve(mesh.dof_count());
  for (int d = 0; d < mesh.dof_count(); ++d) entries.emplace_back(d, mesh.vertex_of_dof[d], 1.0);
  select.setFromTriplets(entries.begin(), entries.end());
  return select;
}

SparseMatrix assemble_vertex_matrix(const Mesh& mesh, const Triplets& entries) {
  SparseMatrix full(mesh.vertex_count(), mesh.vertex_count());
  full.setFromTriplets(entries.begin(), entries.end());
  return full;
}

SparseMatrix restrict_to_interior(const Mesh& mesh, const SparseMatrix& full) {
  const SparseMatrix select = interior_selection(mesh);
  SparseMatrix out = select * full * SparseMatrix(select.transpose());
  out.makeCompressed();
  return out;
}

void add_stiffness(const Mesh& mesh, int t, double coefficient, Triplets& entries) {
  const auto geo = element_geometry(mesh, t);
  const auto& tri = mesh.triangles[t];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double value = coefficient * geo.area *
                           (geo.grad[i][0] * geo.grad[j][0] + geo.grad[i][1] * geo.grad[j][1]);
      entries.emplace_back(tri[i], tri[j], value);
    }
}

void add_mass(const Mesh& mesh, int t, Triplets& entries) {
  const auto geo = element_geometry(mesh, t);
  const auto& tri = mesh.triangles[t];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) entries.emplace_back(tri[i], tri[j], geo.area / 12.0 * (i == j ? 2.0 : 1.0));
}

}  // namespace

std::array<double, 2> Mesh::barycenter(int triangle) const {
  const auto& tri = triangles[triangle];
  std::array<double, 2> c{0.0, 0.0};
  for (int v : tri) {
    c[0] += vertices[v][0] / 3.0;
    c[1] += vertices[v][1] / 3.0;
  }
  return c;
}

bool Mesh::in_left_subdomain(int triangle) const { return barycenter(triangle)[0] < 0.0; }

Mesh build_mesh(int n_side) {
  require(n_side >= 3 && n_side % 2 == 1,
          "build_mesh: n_side must be odd and >= 3 (got " + std::to_string(n_side) + ")");
  Mesh mesh;
  mesh.n_side = n_side;
  mesh.h = 2.0 / (n_side - 1);
  const int count = n_side * n_side;
  mesh.vertices.resize(count);
  mesh.boundary.resize(count);
  mesh.dof_of_vertex.assign(count, -1);
  for (int row = 0; row < n_side; ++row) {
    for (int col = 0; col < n_side; ++col) {
      const int v = row * n_side + col;
      // Symmetric placement keeps x = 0 exact at the middle column.
      mesh.vertices[v] = {(2.0 * col - (n_side - 1)) / (n_side - 1),
                          (2.0 * row - (n_side - 1)) / (n_side - 1)};
      const bool on_boundary = row == 0 || col == 0 || row == n_side - 1 || col == n_side - 1;
      mesh.boundary[v] = on_boundary;
      if (!on_boundary) {
        mesh.dof_of_vertex[v] = static_cast<int>(mesh.vertex_of_dof.size());
        mesh.vertex_of_dof.push_back(v);
      }
    }
  }
  mesh.triangles.reserve(2 * (n_side - 1) * (n_side - 1));
  for (int row = 0; row + 1 < n_side; ++row) {
    for (int col = 0; col + 1 < n_side; ++col) {
      const int v00 = row * n_side + col;
      const int v10 = v00 + 1;
      const int v01 = v00 + n_side;
      const int v11 = v01 + 1;
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

ProblemData ProblemData::benchmark() {
  using std::numbers::pi;
  return {[](double t, double x, double y) { return std::exp(-t) * std::sin(pi * x) * std::sin(pi * y); },
          [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }};
}

ProblemData ProblemData::manufactured() {
  using std::numbers::pi;
  return {[](double t, double x, double y) {
            return (2.0 * pi * pi - 1.0) * std::exp(-t) * std::sin(pi * x) * std::sin(pi * y);
          },
          [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }};
}

ProblemData ProblemData::homogeneous() {
  return {[](double, double, double) { return 0.0; }, [](double, double) { return 0.0; }};
}

AssembledOperators::AssembledOperators(Mesh mesh, ProblemData data, SparseMatrix mass,
                                       SparseMatrix k_left, SparseMatrix k_right,
                                       SparseMatrix mass_coupling)
    : mesh_(std::move(mesh)),
      data_(std::move(data)),
      mass_(std::move(mass)),
      k_left_(std::move(k_left)),
      k_right_(std::move(k_right)),
      mass_coupling_(std::move(mass_coupling)),
      h1_(SparseMatrix(mass_ + k_left_ + k_right_)),
      l2_(mass_) {}

SparseMatrix AssembledOperators::stiffness(double mu) const {
  SparseMatrix a = mu * k_left_ + k_right_;
  a.makeCompressed();
  return a;
}

Vector AssembledOperators::nodal_values(const SpaceFunction& fn) const {
  Vector values(mesh_.vertex_count());
  for (int v = 0; v < mesh_.vertex_count(); ++v)
    values(v) = fn(mesh_.vertices[v][0], mesh_.vertices[v][1]);
  return values;
}

Vector AssembledOperators::interpolate(const SpaceFunction& fn) const {
  Vector values(mesh_.dof_count());
  for (int d = 0; d < mesh_.dof_count(); ++d) {
    const auto& p = mesh_.vertices[mesh_.vertex_of_dof[d]];
    values(d) = fn(p[0], p[1]);
  }
  return values;
}

Vector AssembledOperators::load(double t) const {
  const auto& f = data_.source;
  return mass_coupling_ * nodal_values([&](double x, double y) { return f(t, x, y); });
}

Matrix AssembledOperators::load_matrix(const TimeGrid& grid) const {
  Matrix loads(dim(), grid.node_count());
  for (int j = 0; j < grid.node_count(); ++j) loads.col(j) = load(grid.node(j));
  return loads;
}

Vector AssembledOperators::initial_rhs() const { return mass_coupling_ * nodal_values(data_.initial); }

Vector AssembledOperators::initial() const { return l2_.riesz(initial_rhs()); }

AssembledOperators assemble(const Mesh& mesh, ProblemData data) {
  Triplets mass_entries, left_entries, right_entries;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    add_mass(mesh, t, mass_entries);
    add_stiffness(mesh, t, 1.0, mesh.in_left_subdomain(t) ? left_entries : right_entries);
  }
  const SparseMatrix mass_full = assemble_vertex_matrix(mesh, mass_entries);
  SparseMatrix coupling = interior_selection(mesh) * mass_full;
  coupling.makeCompressed();
  return AssembledOperators(mesh, std::move(data), restrict_to_interior(mesh, mass_full),
                            restrict_to_interior(mesh, assemble_vertex_matrix(mesh, left_entries)),
                            restrict_to_interior(mesh, assemble_vertex_matrix(mesh, right_entries)),
                            std::move(coupling));
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const SpaceFunction& coefficient) {
  Triplets entries;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto c = mesh.barycenter(t);
    add_stiffness(mesh, t, coefficient(c[0], c[1]), entries);
  }
  return restrict_to_interior(mesh, assemble_vertex_matrix(mesh, entries));
}

Trajectory solve_full(const AssembledOperators& ops, double mu, const TimeGrid& grid) {
  require(std::isfinite(mu) && mu > 0.0, "solve_full: mu must be positive");
  require(grid.steps() >= 1, "solve_full: time grid needs at least one step");
  const double tau = grid.tau();
  SparseMatrix system = ops.mass() / tau + ops.stiffness(mu);
  system.makeCompressed();
  const Eigen::SimplicialLLT<SparseMatrix> llt(system);
  if (llt.info() != Eigen::Success) throw SolverError("solve_full: sparse Cholesky failed", mu);

  Matrix u(ops.dim(), grid.node_count());
  u.col(0) = ops.initial();
  for (int j = 1; j <= grid.steps(); ++j) {
    const Vector rhs = ops.mass() * u.col(j - 1) / tau + ops.load(grid.node(j));
    u.col(j) = llt.solve(rhs);
    if (!u.col(j).allFinite()) throw SolverError("solve_full: non-finite solution", mu);
  }
  return Trajectory(grid, std::move(u));
}

ReducedOperators project_operators(const AssembledOperators& ops, const ReducedBasis& basis,
                                   const TimeGrid& grid) {
  require(!basis.empty(), "solve_reduced: basis is empty");
  require(basis.dim() == ops.dim(), "solve_reduced: basis dimension does not match operators");
  const Matrix& b = basis.vectors();
  const Matrix gb = ops.h1().apply(b);
  const Matrix defect = b.transpose() * gb - Matrix::Identity(b.cols(), b.cols());
  require(defect.cwiseAbs().maxCoeff() <= 1e-8, "solve_reduced: basis is not H1-orthonormal");

  ReducedOperators out{basis, grid, {}, {}, {}, {}, {}};
  out.mass = b.transpose() * (ops.mass() * b);
  out.k_left = b.transpose() * (ops.stiffness_left() * b);
  out.k_right = b.transpose() * (ops.stiffness_right() * b);
  out.loads = b.transpose() * ops.load_matrix(grid);
  out.initial_rhs = b.transpose() * ops.initial_rhs();
  return out;
}

Matrix solve_reduced_coefficients(const ReducedOperators& reduced, double mu) {
  require(std::isfinite(mu) && mu > 0.0, "solve_reduced: mu must be positive");
  const TimeGrid& grid = reduced.grid;
  const double tau = grid.tau();
  const Eigen::Index n = reduced.mass.rows();

  Matrix c(n, grid.node_count());
  Eigen::LLT<Matrix> mass_llt(reduced.mass);
  Eigen::LLT<Matrix> step_llt(reduced.mass / tau + mu * reduced.k_left + reduced.k_right);
  if (mass_llt.info() != Eigen::Success || step_llt.info() != Eigen::Success)
    throw SolverError("solve_reduced: reduced system is not positive definite", mu);

  c.col(0) = mass_llt.solve(reduced.initial_rhs);
  for (int j = 1; j <= grid.steps(); ++j) {
    const Vector rhs = reduced.mass * c.col(j - 1) / tau + reduced.loads.col(j);
    c.col(j) = step_llt.solve(rhs);
  }
  return c;
}

Trajectory solve_reduced(const ReducedOperators& reduced, double mu) {
  return Trajectory(reduced.grid, reduced.basis.vectors() * solve_reduced_coefficients(reduced, mu));
}

Trajectory solve_reduced(const AssembledOperators& ops, const ReducedBasis& basis, double mu,
                         const TimeGrid& grid) {
  return solve_reduced(project_operators(ops, basis, grid), mu);
}

double riesz_dual_norm(const Vector& r, const InnerProduct& ip) {
  require(r.size() == ip.dim(), "riesz_dual_norm: dimension mismatch");
  return ip.factor_transpose_solve(r).norm();
}

Matrix residual_functionals(const AssembledOperators& ops, double mu, const Trajectory& state) {
  require(state.dim() == ops.dim(), "residual_functionals: dimension mismatch");
  const TimeGrid& grid = state.grid();
  require(grid.steps() >= 1, "residual_functionals: time grid needs at least one step");
  const Matrix& u = state.columns();
  const Matrix mass_u = ops.mass() * u;
  const Matrix au = ops.stiffness(mu) * u;
  const double tau = grid.tau();

  Matrix r(ops.dim(), grid.node_count());
  r.col(0) = ops.initial_rhs() - mass_u.col(0);
  for (int j = 1; j <= grid.steps(); ++j)
    r.col(j) = ops.load(grid.node(j)) - (mass_u.col(j) - mass_u.col(j - 1)) / tau - au.col(j);
  return r;
}

double estimator_delta(const AssembledOperators& ops, const ReducedBasis& basis, double mu,
                       const TimeGrid& grid, const Trajectory& reduced) {
  require(basis.dim() == ops.dim(), "estimator_delta: basis dimension does not match operators");
  require(reduced.grid() == grid, "estimator_delta: reduced solution lives on another grid");
  const Matrix r = residual_functionals(ops, mu, reduced);
  const Matrix representers = ops.h1().factor_transpose_solve(r);
  return std::sqrt(grid.tau()) * representers.norm();
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& matrix) {
  if (!Eigen::saveMarket(matrix, path.string()))
    throw std::runtime_error("write_matrix_market: cannot write " + path.string());
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "mesh " << mesh.n_side << ' ' << mesh.vertex_count() << ' ' << mesh.triangles.size() << '\n';
  out.precision(17);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << mesh.vertices[v][0] << ' ' << mesh.vertices[v][1] << ' ' << (mesh.boundary[v] ? 1 : 0) << '\n';
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << (mesh.in_left_subdomain(t) ? 1 : 2) << '\n';
  }
}

}  // namespace mormor
