#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smacollide/manufactured.hpp"
#include "smacollide/thermal.hpp"

#include <random>

using namespace smacollide;

namespace {

ScalarField constant(const Mesh& m, double v) { return ScalarField::Constant(m.num_nodes(), v); }

LinearSolveOptions tight() {
  LinearSolveOptions o;
  o.tol = 1e-13;
  return o;
}

}  // namespace

TEST_CASE("stationary uniform state") {
  const Mesh m = build_structured_mesh(8, 8, 1e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  const ScalarField T = solve_thermal(m, constant(m, 300.0), constant(m, 0.1), constant(m, 0.1),
                                      uniform_dissipation(m, 0.0), p, {});
  CHECK((T.array() - 300.0).abs().maxCoeff() == 0.0);
}

TEST_CASE("uniform work heats uniformly") {
  const Mesh m = build_structured_mesh(8, 8, 1e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  const double w = 3.7e7;
  const ScalarField T = solve_thermal(m, constant(m, 300.0), constant(m, 0.0), constant(m, 0.0),
                                      uniform_dissipation(m, w), p, {}, tight());
  CHECK((T.array() - (300.0 + w / p.heat_capacity)).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("uniform work and phase jump") {
  const Mesh m = build_structured_mesh(7, 5, 2e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  const double w = 5e7, b = 0.3;
  const ScalarField T = solve_thermal(m, constant(m, 310.0), constant(m, 0.4), constant(m, 0.4 - b),
                                      uniform_dissipation(m, w), p, {}, tight());
  CHECK((T.array() - (310.0 + (w - p.latent_heat * b) / p.heat_capacity)).abs().maxCoeff() <= 1e-9);
}

TEST_CASE("adiabatic energy balance with rough data") {
  const Mesh m = build_structured_mesh(20, 20, 1e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd pt(m.num_triangles());
  for (auto& v : pt) v = 1e8 * u(rng);
  DissipationField d{pt, project_to_nodes(m, pt)};
  ScalarField Tm(m.num_nodes()), b3p(m.num_nodes()), b3m(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) {
    Tm(i) = 290.0 + 20.0 * u(rng);
    b3p(i) = u(rng);
    b3m(i) = u(rng);
  }
  const ThermalSolver solver(m, p, {});
  const auto sol = solver.solve(Tm, b3p, b3m, d.nodal, tight());
  const Eigen::VectorXd& ml = solver.lumped_mass();
  const double lhs = p.heat_capacity * ml.dot(sol.T_plus - Tm) + p.latent_heat * ml.dot(b3p - b3m);
  double work = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) work += signed_area(m, t) * pt(t);
  CHECK(std::abs(lhs - work) <= 1e-9 * work);
}

TEST_CASE("minimum temperature does not drop") {
  for (int n : {4, 10, 25}) {
    const Mesh m = build_structured_mesh(n, n, 1e-3, 1e-3);
    const MaterialParams p = nickel_titanium();
    std::mt19937 rng(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd pt(m.num_triangles());
    for (auto& v : pt) v = 1e7 * u(rng);
    const ScalarField diss = project_to_nodes(m, pt);
    ScalarField Tm(m.num_nodes()), b3m = constant(m, 0.2), b3p(m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i) {
      Tm(i) = 300.0 + 5.0 * u(rng);
      b3p(i) = b3m(i) + u(rng) * diss(i) / p.latent_heat;  // [beta3] <= work / l_a
    }
    const auto sol = ThermalSolver(m, p, {}).solve(Tm, b3p, b3m, diss, tight());
    CHECK(sol.T_plus.minCoeff() >= Tm.minCoeff() - 1e-9);
  }
}

TEST_CASE("superposition") {
  const Mesh m = build_structured_mesh(10, 10, 1e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  const ThermalSolver solver(m, p, {});
  const ScalarField Tm = constant(m, 300.0), zero = constant(m, 0.0);
  ScalarField d1(m.num_nodes()), d2(m.num_nodes()), j1(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) {
    d1(i) = 1e7 * (1 + std::sin(7.0 * i));
    d2(i) = 1e7 * (1 + std::cos(3.0 * i));
    j1(i) = 0.1 * std::sin(1.0 * i);
  }
  const ScalarField a = solver.solve(Tm, j1, zero, d1, tight()).T_plus - Tm;
  const ScalarField b = solver.solve(Tm, zero, zero, d2, tight()).T_plus - Tm;
  const ScalarField ab = solver.solve(Tm, j1, zero, d1 + d2, tight()).T_plus - Tm;
  CHECK((ab - a - b).cwiseAbs().maxCoeff() <= 1e-10 * ab.cwiseAbs().maxCoeff());
}

TEST_CASE("Robin exchange") {
  const Mesh m = build_structured_mesh(12, 12, 1e-3, 1e-3);
  MaterialParams p = nickel_titanium();
  const ThermalBC bc{ThermalBCKind::Robin, 5e3, 300.0};
  // in equilibrium with the surroundings nothing happens
  const ScalarField zero = constant(m, 0.0);
  const ThermalSolver solver(m, p, bc);
  CHECK((solver.solve(constant(m, 300.0), zero, zero, zero).T_plus.array() - 300.0).abs().maxCoeff() <= 1e-12);

  // global balance: C int [T] + int_Gamma h (Tbar - T_ext) = int work
  const ScalarField Tm = constant(m, 320.0);
  const ScalarField diss = constant(m, 2e7);
  const auto sol = solver.solve(Tm, zero, zero, diss, tight());
  const SparseMatrix B = assemble_boundary_mass(m);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
  const Eigen::VectorXd& ml = solver.lumped_mass();
  const double exchange = bc.h_coeff * ones.dot(B * (0.5 * (sol.T_plus + Tm) - constant(m, bc.T_ext)));
  const double lhs = p.heat_capacity * ml.dot(sol.T_plus - Tm) + exchange;
  CHECK(std::abs(lhs - ml.dot(diss)) <= 1e-9 * ml.dot(diss));
  // cooler surroundings: boundary colder than the centre
  CHECK(sol.T_plus(0) < sol.T_plus(6 * 13 + 6));

  // C = 0 is allowed with a Robin anchor, not without
  p.heat_capacity = 0.0;
  CHECK_NOTHROW(ThermalSolver(m, p, bc));
  CHECK_THROWS_AS(ThermalSolver(m, p, ThermalBC{}), std::invalid_argument);
  CHECK_THROWS_AS(ThermalSolver(m, nickel_titanium(), ThermalBC{ThermalBCKind::Robin, -1.0, 300.0}), std::invalid_argument);
  CHECK_THROWS_AS(ThermalSolver(m, nickel_titanium(), ThermalBC{ThermalBCKind::Robin, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("input checks and warnings") {
  const Mesh m = build_structured_mesh(3, 3, 1e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  const ThermalSolver solver(m, p, {});
  const ScalarField zero = constant(m, 0.0);
  CHECK_THROWS_AS(solver.solve(constant(m, 0.0), zero, zero, zero), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve(ScalarField::Constant(2, 300.0), zero, zero, zero), std::invalid_argument);
  // latent heat larger than the thermal content: T+ = 10 - l_a / C < 0
  const auto sol = solver.solve(constant(m, 10.0), constant(m, 1.0), zero, zero);
  CHECK(sol.T_plus.maxCoeff() < 0.0);
  CHECK(sol.warnings.size() == 1);
}

TEST_CASE("extra heat source") {
  const Mesh m = build_structured_mesh(4, 4, 1e-3, 1e-3);
  const MaterialParams p = nickel_titanium();
  const ThermalSolver solver(m, p, {});
  const ScalarField zero = constant(m, 0.0), f = constant(m, 5.4e6);
  CHECK((solver.solve(constant(m, 300.0), zero, zero, zero, tight(), &f).T_plus.array() - 301.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("manufactured solution converges at second order") {
  const auto study = thermal_convergence(refinement_levels(4));
  REQUIRE(study.rates.size() == 3);
  for (double r : study.rates) CHECK(r >= 1.9);
}
