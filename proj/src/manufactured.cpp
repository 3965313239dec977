#include "smacollide/manufactured.hpp"

#include "smacollide/fem.hpp"
#include "smacollide/thermal.hpp"
#include "smacollide/velocity.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smacollide {

namespace {

std::vector<double> rates_of(const std::vector<double>& e) {
  std::vector<double> r;
  for (std::size_t k = 0; k + 1 < e.size(); ++k) r.push_back(std::log2(e[k] / e[k + 1]));
  return r;
}

}  // namespace

std::vector<int> refinement_levels(int levels, int coarsest) {
  if (levels < 2 || levels > 8 || coarsest < 1) throw std::invalid_argument("refinement_levels: need 2 <= levels <= 8");
  std::vector<int> out;
  for (int k = 0; k < levels; ++k) out.push_back(coarsest << k);
  return out;
}

ConvergenceStudy velocity_convergence(const std::vector<int>& cells) {
  using std::numbers::pi;
  const double A = 1.0, B = 1.0, a = 0.5 * pi, b = 0.5 * pi;
  auto exact = [=](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(A * std::sin(a * x.x()) * std::sin(b * x.y()), B * std::cos(a * x.x()) * std::sin(b * x.y()));
  };
  auto strain = [=](const Eigen::Vector2d& x) {
    const double sx = std::sin(a * x.x()), cx = std::cos(a * x.x());
    const double sy = std::sin(b * x.y()), cy = std::cos(b * x.y());
    Eigen::Matrix2d d;
    d(0, 0) = A * a * cx * sy;
    d(1, 1) = B * b * cx * cy;
    d(0, 1) = d(1, 0) = 0.5 * (A * b * sx * cy - B * a * sx * sy);
    return d;
  };
  auto body = [=](const Eigen::Vector2d& x) {
    const double sx = std::sin(a * x.x()), cx = std::cos(a * x.x());
    const double sy = std::sin(b * x.y()), cy = std::cos(b * x.y());
    const double div1 = -A * a * a * sx * sy + 0.5 * (-A * b * b * sx * sy - B * a * b * sx * cy);
    const double div2 = 0.5 * (A * a * b * cx * cy - B * a * a * cx * sy) - B * b * b * cx * sy;
    return Eigen::Vector2d(exact(x) - Eigen::Vector2d(div1, div2));
  };

  BoundarySpec spec;
  spec.gamma1 = BoundaryRegion{};
  ConvergenceStudy st;
  for (int n : cells) {
    const Mesh mesh = build_structured_mesh(n, n, 1.0, 1.0, spec);
    const std::array<BoundaryTag, 1> tags{BoundaryTag::GammaFree};
    Eigen::VectorXd f = assemble_vector_volume_load(mesh, body);
    f += assemble_boundary_traction(mesh, tags, [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nrm) {
      return Eigen::Vector2d(strain(x) * nrm);
    });
    LinearSolveOptions opts;
    opts.tol = 1e-12;
    const VectorField U = solve_velocity(mesh, 1.0, 1.0, f, VectorField::Zero(mesh.num_nodes(), 2), opts);
    st.cells.push_back(n);
    st.errors.push_back(l2_error(mesh, U, exact));
  }
  st.rates = rates_of(st.errors);
  return st;
}

ConvergenceStudy thermal_convergence(const std::vector<int>& cells) {
  using std::numbers::pi;
  const double Tm = 1.0, amp = 0.5;
  MaterialParams p;
  p.heat_capacity = 1.0;
  p.lambda = 1.0;
  p.latent_heat = 1.0;
  p.T0 = 1.0;
  auto exact = [=](const Eigen::Vector2d& x) { return Tm + amp * std::cos(pi * x.x()) * std::cos(pi * x.y()); };

  ConvergenceStudy st;
  for (int n : cells) {
    const Mesh mesh = build_structured_mesh(n, n, 1.0, 1.0);
    const int nn = mesh.num_nodes();
    ScalarField source(nn);
    for (int i = 0; i < nn; ++i) {
      const Eigen::Vector2d x = mesh.node(i);
      source(i) = (p.heat_capacity + 0.5 * p.lambda * 2.0 * pi * pi) * amp * std::cos(pi * x.x()) * std::cos(pi * x.y());
    }
    const ScalarField zero = ScalarField::Zero(nn);
    LinearSolveOptions opts;
    opts.tol = 1e-12;
    const ThermalSolver solver(mesh, p, ThermalBC{});
    const auto sol = solver.solve(ScalarField::Constant(nn, Tm), zero, zero, zero, opts, &source);
    st.cells.push_back(n);
    st.errors.push_back(l2_error(mesh, sol.T_plus, exact));
  }
  st.rates = rates_of(st.errors);
  return st;
}

}  // namespace smacollide
