#include "smacollide/velocity.hpp"

#include <stdexcept>

namespace smacollide {

VectorField solve_velocity(const Mesh& mesh, double rho, double k_v, const PercussionLoad& load,
                           const VectorField& U_minus, const LinearSolveOptions& opts, SolveReport* report) {
  if (!(load.magnitude >= 0.0)) throw std::invalid_argument("solve_velocity: percussion magnitude must be >= 0");
  const Eigen::VectorXd f = assemble_boundary_traction(mesh, load.region, load.vector());
  return solve_velocity(mesh, rho, k_v, f, U_minus, opts, report);
}

VectorField solve_velocity(const Mesh& mesh, double rho, double k_v, const Eigen::VectorXd& load_vector,
                           const VectorField& U_minus, const LinearSolveOptions& opts, SolveReport* report) {
  const int n = mesh.num_nodes();
  if (!(rho >= 0.0)) throw std::invalid_argument("solve_velocity: rho must be >= 0");
  if (!(k_v > 0.0)) throw std::invalid_argument("solve_velocity: k_v must be > 0");
  if (U_minus.rows() != n || load_vector.size() != 2 * n)
    throw std::invalid_argument("solve_velocity: field sizes do not match the mesh");

  const auto fixed_nodes = nodes_with_tag(mesh, BoundaryTag::Gamma0);
  if (fixed_nodes.empty() && rho == 0.0)
    throw NumericalError("solve_velocity: no Gamma0 support and rho = 0, the system is singular");

  const SparseMatrix mass = assemble_vector_mass(mesh);
  const SparseMatrix stiff = assemble_elastic_stiffness(mesh);
  const SparseMatrix lhs = rho * mass + k_v * stiff;

  // U- as an interleaved vector
  Eigen::VectorXd um(2 * n);
  for (int i = 0; i < n; ++i) um.segment<2>(2 * i) = U_minus.row(i).transpose();
  Eigen::VectorXd rhs = load_vector;
  if (um.squaredNorm() > 0.0) rhs += rho * (mass * um) - k_v * (stiff * um);

  std::map<int, double> fixed;
  for (int i : fixed_nodes) {
    fixed[2 * i] = 0.0;
    fixed[2 * i + 1] = 0.0;
  }
  const auto sys = apply_dirichlet(lhs, rhs, fixed);
  const auto sol = solve_spd(sys.a, sys.b, opts);
  if (report) *report = sol.report;
  if (!sol.report.converged)
    throw NumericalError("solve_velocity: PCG stopped at relative residual " + std::to_string(sol.report.final_residual));

  VectorField U(n, 2);
  for (int i = 0; i < n; ++i) U.row(i) = sol.x.segment<2>(2 * i).transpose();
  return U;
}

ScalarField project_to_nodes(const Mesh& mesh, const Eigen::VectorXd& per_triangle) {
  ScalarField num = ScalarField::Zero(mesh.num_nodes());
  ScalarField den = ScalarField::Zero(mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double w = triangle_area(triangle_vertices(mesh, t)) / 3.0;
    for (int k = 0; k < 3; ++k) {
      num(mesh.triangles(t, k)) += w * per_triangle(t);
      den(mesh.triangles(t, k)) += w;
    }
  }
  return num.cwiseQuotient(den);
}

DissipationField dissipated_work(const Mesh& mesh, const VectorField& U_plus, const VectorField& U_minus, double k_v) {
  if (U_plus.rows() != mesh.num_nodes() || U_minus.rows() != mesh.num_nodes())
    throw std::invalid_argument("dissipated_work: field sizes do not match the mesh");
  DissipationField out;
  out.per_triangle.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = p1_gradients(triangle_vertices(mesh, t));
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // grad(i, j) = d W_i / d x_j
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles(t, k);
      const Eigen::Vector2d w = 0.5 * (U_plus.row(v) + U_minus.row(v)).transpose();
      grad += w * g.row(k);
    }
    const Eigen::Matrix2d d = 0.5 * (grad + grad.transpose());
    out.per_triangle(t) = 2.0 * k_v * d.squaredNorm();
  }
  out.nodal = project_to_nodes(mesh, out.per_triangle);
  return out;
}

DissipationField uniform_dissipation(const Mesh& mesh, double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("uniform_dissipation: dissipated work must be >= 0");
  return {Eigen::VectorXd::Constant(mesh.num_triangles(), value), ScalarField::Constant(mesh.num_nodes(), value)};
}

}  // namespace smacollide
