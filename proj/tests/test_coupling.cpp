#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smacollide/closed_form.hpp"
#include "smacollide/coupling.hpp"
#include "support.hpp"

using namespace smacollide;
using test_support::Hammer;

namespace {

CollisionOptions tight(double fp_tol = 1e-10) {
  CollisionOptions o;
  o.fp.tol = fp_tol;
  o.linear.tol = 1e-12;
  o.phase.tol = 1e-13;
  return o;
}

}  // namespace

TEST_CASE("no percussion, no change") {
  Hammer s(10);
  const auto r = solve_collision(s.mesh, s.params, s.pre, PercussionLoad{0.0, 1.0}, {});
  CHECK(r.diagnostics.converged);
  CHECK(r.U_plus.cwiseAbs().maxCoeff() == 0.0);
  CHECK((r.T_plus - s.pre.T_minus).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((r.beta_plus - s.pre.beta_minus).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("prescribed uniform work matches the homogeneous solution") {
  const MaterialParams p = nickel_titanium();
  const double Tm = 0.9 * p.T0;
  const Eigen::Vector3d bm(0.5, 0.5, 0.0);
  const auto [lo, hi] = mixture_window(Tm, 0.0, p.c, p.heat_capacity, p.latent_heat, p.T0);
  for (int n : {1, 3, 8}) {
    const Mesh m = build_structured_mesh(n, n, 1e-3, 1e-3);
    for (double w : {0.5 * lo, 0.5 * (lo + hi), 1.5 * hi}) {
      CollisionOptions o = tight(1e-12);
      o.prescribed_diss = uniform_dissipation(m, w);
      const auto r = solve_collision(m, p, PreState::uniform(m, Tm, bm), {}, {}, o);
      REQUIRE(r.diagnostics.converged);
      const auto ref = solve_0d(ClosedFormInput{Tm, bm, w, p});
      CHECK((r.T_plus.array() - ref.T_plus).abs().maxCoeff() <= 1e-8 * ref.T_plus);
      for (int k = 0; k < 3; ++k) CHECK((r.beta_plus.col(k).array() - ref.beta_plus(k)).abs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("constraints hold at every outer iteration") {
  Hammer s(20);
  s.params.lambda = 0.05;  // weak conduction lets austenite form
  for (int k = 1; k <= 4; ++k) {
    CollisionOptions o;
    o.fp.max_iter = k;
    const auto r = solve_collision(s.mesh, s.params, s.pre, s.load, {}, o);
    CHECK((r.beta_plus.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(feasibility_violation(chi_from_beta(r.beta_plus)) <= 1e-12);
    CHECK(r.diagnostics.complementarity <= 1e-8 * (1 + r.diagnostics.phase_load_norm));
    if (!r.diagnostics.converged) CHECK(!r.diagnostics.warnings.empty());
  }
}

TEST_CASE("hammer stroke on a coarse mesh") {
  Hammer s(24);
  const auto r = solve_collision(s.mesh, s.params, s.pre, s.load, {});
  REQUIRE(r.diagnostics.converged);
  CHECK(r.U_plus.cwiseAbs().maxCoeff() > 0.0);
  CHECK((r.beta_plus.col(0) - r.beta_plus.col(1)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(r.diss.per_triangle.minCoeff() >= 0.0);
  // the update norm does not grow after the first iteration
  const auto& u = r.diagnostics.update_T;
  for (std::size_t k = 2; k < u.size(); ++k) CHECK(u[k] <= u[k - 1] * (1 + 1e-12));
  // hottest node on the clamp or under the stroke
  Eigen::Index imax;
  r.T_plus.maxCoeff(&imax);
  const auto g0 = nodes_with_tag(s.mesh, BoundaryTag::Gamma0);
  const auto g1 = nodes_with_tag(s.mesh, BoundaryTag::Gamma1);
  const bool on = std::binary_search(g0.begin(), g0.end(), int(imax)) || std::binary_search(g1.begin(), g1.end(), int(imax));
  CHECK(on);
  // energy bookkeeping
  const Eigen::VectorXd ml = lumped_mass(s.mesh);
  double work = 0.0;
  for (int t = 0; t < s.mesh.num_triangles(); ++t) work += signed_area(s.mesh, t) * r.diss.per_triangle(t);
  const double bal = s.params.heat_capacity * ml.dot(r.T_plus - s.pre.T_minus) +
                     s.params.latent_heat * ml.dot(r.beta_plus.col(2) - s.pre.beta_minus.col(2));
  CHECK(std::abs(bal - work) <= 1e-9 * work);
}

TEST_CASE("two starting guesses reach the same fixed point") {
  for (double lambda : {18.0, 0.05}) {
    Hammer s(16);
    s.params.lambda = lambda;
    CollisionOptions a = tight(1e-10);
    CollisionOptions b = a;
    b.initial_guess = PhasePair(PhasePair::Zero(s.mesh.num_nodes(), 2));
    b.initial_guess->col(1).setConstant(1.0);
    a.initial_guess = PhasePair(PhasePair::Zero(s.mesh.num_nodes(), 2));
    const auto ra = solve_collision(s.mesh, s.params, s.pre, s.load, {}, a);
    const auto rb = solve_collision(s.mesh, s.params, s.pre, s.load, {}, b);
    REQUIRE(ra.diagnostics.converged);
    REQUIRE(rb.diagnostics.converged);
    CHECK((ra.beta_plus - rb.beta_plus).cwiseAbs().maxCoeff() <= 10 * a.fp.tol);
    CHECK(((ra.T_plus - rb.T_plus).array().abs() / (1.0 + ra.T_plus.array().abs())).maxCoeff() <= 10 * a.fp.tol);
    if (lambda < 1.0) CHECK(ra.beta_plus.col(2).maxCoeff() > 0.0);
  }
}

TEST_CASE("stability probe") {
  Hammer s(10);
  s.params.lambda = 0.05;
  const CollisionOptions o = tight(1e-10);
  StabilityData base{s.load, {}, {}};
  CHECK_THROWS_AS(stability_probe(s.mesh, s.params, s.pre, {}, o, base, base), std::invalid_argument);

  std::vector<double> g_ratios, f_ratios;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    StabilityData pert = base;
    pert.load.magnitude *= 1 + eps;
    const auto pg = stability_probe(s.mesh, s.params, s.pre, {}, o, base, pert);
    CHECK(std::isfinite(pg.ratio));
    g_ratios.push_back(pg.ratio);

    StabilityData heat = base;
    heat.heat_source = ScalarField::Constant(s.mesh.num_nodes(), eps * 1e7);
    const auto pf = stability_probe(s.mesh, s.params, s.pre, {}, o, base, heat);
    f_ratios.push_back(pf.ratio);
  }
  for (std::size_t k = 1; k < g_ratios.size(); ++k) CHECK(g_ratios[k] <= 1.5 * g_ratios[k - 1]);
  for (std::size_t k = 1; k < f_ratios.size(); ++k) {
    CHECK(f_ratios[k] <= 1.5 * f_ratios[k - 1]);
    CHECK(f_ratios[k] >= f_ratios[k - 1] / 1.5);
  }
}

TEST_CASE("option and input checks") {
  Hammer s(4);
  CollisionOptions o;
  o.fp.relaxation = 0.0;
  CHECK_THROWS_AS(solve_collision(s.mesh, s.params, s.pre, s.load, {}, o), std::invalid_argument);
  o = {};
  o.fp.tol = 0.0;
  CHECK_THROWS_AS(solve_collision(s.mesh, s.params, s.pre, s.load, {}, o), std::invalid_argument);
  PreState bad = s.pre;
  bad.beta_minus(0, 0) = 0.9;
  CHECK_THROWS_AS(solve_collision(s.mesh, s.params, bad, s.load, {}), std::invalid_argument);
  o = {};
  o.fp.max_iter = 1;
  o.prescribed_diss = uniform_dissipation(s.mesh, 1e8);
  const auto r = solve_collision(s.mesh, s.params, s.pre, s.load, {}, o);
  CHECK_FALSE(r.diagnostics.converged);
  CHECK(r.diagnostics.iterations == 1);
}

TEST_CASE("relaxation still reaches the fixed point") {
  Hammer s(8);
  s.params.lambda = 0.05;
  CollisionOptions a = tight(1e-10), b = tight(1e-10);
  b.fp.relaxation = 0.5;
  const auto ra = solve_collision(s.mesh, s.params, s.pre, s.load, {}, a);
  const auto rb = solve_collision(s.mesh, s.params, s.pre, s.load, {}, b);
  REQUIRE(rb.diagnostics.converged);
  CHECK((ra.beta_plus - rb.beta_plus).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(rb.diagnostics.iterations >= ra.diagnostics.iterations);
}
