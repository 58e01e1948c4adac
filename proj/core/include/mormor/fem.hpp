#pragma once

// Linear finite elements on a uniform right-triangle mesh of (-1,1)^2 with
// homogeneous Dirichlet conditions, and implicit Euler full/reduced solvers
// for  du/dt - div(a_mu grad u) = f,  a_mu = mu * 1_{x<=0} + 1_{x>0}.

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

#include "mormor/reduced_basis.hpp"
#include "mormor/spacetime.hpp"

namespace mormor {

struct Mesh {
  int n_side = 0;  // vertices per side
  double h = 0.0;  // cell width
  std::vector<std::array<double, 2>> vertices;  // row-major: index = row * n_side + col
  std::vector<std::array<int, 3>> triangles;    // counter-clockwise
  std::vector<bool> boundary;
  std::vector<int> dof_of_vertex;  // -1 on the boundary
  std::vector<int> vertex_of_dof;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int dof_count() const { return static_cast<int>(vertex_of_dof.size()); }
  std::array<double, 2> barycenter(int triangle) const;
  /// Subdomain 1 is (-1,0] x (-1,1): triangles with barycenter x < 0.
  bool in_left_subdomain(int triangle) const;
};

/// Uniform triangulation; every square cell is cut along its
/// bottom-left/top-right diagonal. n_side must be odd and >= 3 so that x = 0
/// is a mesh line.
Mesh build_mesh(int n_side);

using SpaceFunction = std::function<double(double x, double y)>;
using SpaceTimeFunction = std::function<double(double t, double x, double y)>;

/// Source term f(t, x, y) and initial value g(x, y).
struct ProblemData {
  SpaceTimeFunction source;
  SpaceFunction initial;

  /// f = e^{-t} sin(pi x) sin(pi y), g = sin(pi x) sin(pi y).
  static ProblemData benchmark();
  /// f = (2 pi^2 - 1) e^{-t} sin(pi x) sin(pi y), g = sin(pi x) sin(pi y):
  /// with a = 1 the exact solution is e^{-t} sin(pi x) sin(pi y).
  static ProblemData manufactured();
  static ProblemData homogeneous();
};

/// Interior-dof operators. Parameter-independent pieces of the affine
/// stiffness mu * K1 + K2 are kept separately.
class AssembledOperators {
 public:
  AssembledOperators(Mesh mesh, ProblemData data, SparseMatrix mass, SparseMatrix k_left,
                     SparseMatrix k_right, SparseMatrix mass_coupling);

  const Mesh& mesh() const { return mesh_; }
  Eigen::Index dim() const { return mass_.rows(); }

  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness_left() const { return k_left_; }
  const SparseMatrix& stiffness_right() const { return k_right_; }
  const SparseMatrix& h1_gram() const { return h1_.gram(); }
  SparseMatrix stiffness(double mu) const;

  /// Full H^1 inner product M + K1 + K2.
  const InnerProduct& h1() const { return h1_; }
  /// L^2 inner product M.
  const InnerProduct& l2() const { return l2_; }

  /// (f(t), phi_i) for interior hat functions, f nodally interpolated.
  Vector load(double t) const;
  Matrix load_matrix(const TimeGrid& grid) const;
  /// (g, phi_i), g nodally interpolated (boundary values included).
  Vector initial_rhs() const;
  /// L^2 projection of g onto V_h.
  Vector initial() const;

  /// Nodal values of a function at the interior vertices.
  Vector interpolate(const SpaceFunction& fn) const;

 private:
  Vector nodal_values(const SpaceFunction& fn) const;

  Mesh mesh_;
  ProblemData data_;
  SparseMatrix mass_;
  SparseMatrix k_left_;
  SparseMatrix k_right_;
  SparseMatrix mass_coupling_;  // interior rows x all vertices
  InnerProduct h1_;
  InnerProduct l2_;
};

AssembledOperators assemble(const Mesh& mesh, ProblemData data = ProblemData::benchmark());

/// Stiffness of a scalar coefficient evaluated at each triangle's
/// barycenter, restricted to interior dofs. Independent of the affine split.
SparseMatrix assemble_stiffness(const Mesh& mesh, const SpaceFunction& coefficient);

/// Implicit Euler: u^0 = L^2 projection of g, then
/// (M/tau + mu K1 + K2) u^j = M u^{j-1} / tau + F(t_j). One sparse Cholesky
/// factorization per call. Throws ContractViolation for mu <= 0.
Trajectory solve_full(const AssembledOperators& ops, double mu, const TimeGrid& grid);

/// Galerkin-projected operators for one basis and time grid.
struct ReducedOperators {
  ReducedBasis basis;
  TimeGrid grid;
  Matrix mass;     // B^T M B
  Matrix k_left;   // B^T K1 B
  Matrix k_right;  // B^T K2 B
  Matrix loads;    // B^T F(t_j), N x (J+1)
  Vector initial_rhs;  // B^T (g, phi)
};

ReducedOperators project_operators(const AssembledOperators& ops, const ReducedBasis& basis,
                                   const TimeGrid& grid);

/// Reduced coefficients c^j (N x (J+1)).
Matrix solve_reduced_coefficients(const ReducedOperators& reduced, double mu);

/// Reduced solution lifted back to V_h coefficients. Throws
/// ContractViolation for an empty or non-orthonormal basis.
Trajectory solve_reduced(const ReducedOperators& reduced, double mu);
Trajectory solve_reduced(const AssembledOperators& ops, const ReducedBasis& basis, double mu,
                         const TimeGrid& grid);

/// sqrt(r^T G^{-1} r), via the triangular factor of G.
double riesz_dual_norm(const Vector& r, const InnerProduct& ip);

/// Residual functionals of the fully discrete scheme evaluated at `state`:
/// column 0 is (g - u^0, phi_i); column j >= 1 is
/// F(t_j) - M (u^j - u^{j-1}) / tau - (mu K1 + K2) u^j.
Matrix residual_functionals(const AssembledOperators& ops, double mu, const Trajectory& state);

/// Delta(mu) = sqrt(tau * sum_{j=0}^{J} ||r_j||^2_{V_h^*}) with the H^1 dual
/// norm. `reduced` is the (lifted) reduced solution for (mu, basis); an empty
/// basis with a zero trajectory is allowed.
double estimator_delta(const AssembledOperators& ops, const ReducedBasis& basis, double mu,
                       const TimeGrid& grid, const Trajectory& reduced);

/// MatrixMarket coordinate file.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& matrix);
/// Plain-text mesh: header, vertices "x y boundary", triangles "a b c subdomain".
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace mormor
