#include "smacollide/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace smacollide {

PreState PreState::uniform(const Mesh& mesh, double T_minus, const Eigen::Vector3d& beta_minus) {
  PreState s;
  s.T_minus = ScalarField::Constant(mesh.num_nodes(), T_minus);
  s.beta_minus = beta_minus.transpose().replicate(mesh.num_nodes(), 1);
  s.U_minus = VectorField::Zero(mesh.num_nodes(), 2);
  return s;
}

CollisionResult solve_collision(const Mesh& mesh, const MaterialParams& params, const PreState& pre,
                                const PercussionLoad& load, const ThermalBC& bc, const CollisionOptions& opts) {
  const int n = mesh.num_nodes();
  if (pre.T_minus.size() != n || pre.beta_minus.rows() != n || pre.U_minus.rows() != n)
    throw std::invalid_argument("solve_collision: pre-collision fields do not match the mesh");
  if (!(opts.fp.tol > 0.0)) throw std::invalid_argument("solve_collision: fixed-point tol must be > 0");
  if (!(opts.fp.relaxation > 0.0 && opts.fp.relaxation <= 1.0))
    throw std::invalid_argument("solve_collision: relaxation must lie in (0, 1]");
  if (opts.fp.max_iter < 1) throw std::invalid_argument("solve_collision: fixed-point max_iter must be >= 1");

  const PhasePair chi_minus = chi_from_beta(pre.beta_minus);
  const ScalarField beta3_minus = chi_minus.col(1);

  CollisionResult res;
  auto& diag = res.diagnostics;
  if (opts.prescribed_diss) {
    res.diss = *opts.prescribed_diss;
    if (res.diss.nodal.size() != n) throw std::invalid_argument("solve_collision: prescribed work does not match the mesh");
    res.U_plus = pre.U_minus;
  } else {
    try {
      res.U_plus = solve_velocity(mesh, params.rho, params.k_v, load, pre.U_minus, opts.linear, &diag.velocity);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("velocity stage: ") + e.what());
    }
    res.diss = dissipated_work(mesh, res.U_plus, pre.U_minus, params.k_v);
  }

  const ThermalSolver thermal(mesh, params, bc);
  PhaseSolver phase(mesh, params);
  const ScalarField* source = opts.heat_source ? &*opts.heat_source : nullptr;
  const PhasePair* flux = opts.phase_flux ? &*opts.phase_flux : nullptr;

  PhasePair chi = opts.initial_guess ? *opts.initial_guess : chi_minus;
  if (chi.rows() != n) throw std::invalid_argument("solve_collision: initial guess does not match the mesh");
  ScalarField T_prev = pre.T_minus;
  double omega = opts.fp.relaxation;
  int increases = 0;
  PhaseSolution last;

  for (int k = 1; k <= opts.fp.max_iter; ++k) {
    ThermalSolution th;
    try {
      th = thermal.solve(pre.T_minus, chi.col(1), beta3_minus, res.diss.nodal, opts.linear, source,
                         k > 1 ? &T_prev : nullptr);
    } catch (const NumericalError& e) {
      throw NumericalError("thermal stage, iteration " + std::to_string(k) + ": " + e.what());
    }
    diag.thermal.push_back(th.report);
    last = phase.solve(th.T_plus, chi_minus, opts.phase, flux, &chi);
    diag.phase.push_back(last.report);
    if (!last.report.converged) diag.warnings.push_back("phase solve did not converge at iteration " + std::to_string(k));

    const double dT = ((th.T_plus - T_prev).array().abs() / (1.0 + th.T_plus.array().abs())).maxCoeff();
    const PhasePair d = last.chi - chi;
    const double dbeta = std::max(d.cwiseAbs().maxCoeff(), (d.col(0) + d.col(1)).cwiseAbs().maxCoeff());
    diag.update_T.push_back(dT);
    diag.update_beta.push_back(dbeta);
    diag.iterations = k;

    if (dT <= opts.fp.tol && dbeta <= opts.fp.tol) {
      diag.converged = true;
      break;
    }
    const auto& ub = diag.update_beta;
    if (ub.size() >= 2 && ub[ub.size() - 1] > ub[ub.size() - 2]) {
      if (++increases >= 2) {
        omega *= 0.5;
        increases = 0;
      }
    } else {
      increases = 0;
    }
    chi += omega * d;
    T_prev = th.T_plus;
  }
  diag.relaxation = omega;

  // energy-consistent temperature for the returned phases
  const ThermalSolution th = thermal.solve(pre.T_minus, last.chi.col(1), beta3_minus, res.diss.nodal, opts.linear,
                                           source, &T_prev);
  diag.thermal.push_back(th.report);
  diag.warnings.insert(diag.warnings.end(), th.warnings.begin(), th.warnings.end());
  res.T_plus = th.T_plus;
  res.beta_plus = beta_from_chi(last.chi);
  res.reactions = last.xi;
  diag.complementarity = last.complementarity;
  diag.phase_load_norm = last.load_norm;
  if (!diag.converged)
    diag.warnings.push_back("fixed point not converged after " + std::to_string(diag.iterations) + " iterations");
  return res;
}

namespace {

double v_norm(const SparseMatrix& A, const SparseMatrix& B, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(A * x) + x.dot(B * x)));
}

}  // namespace

StabilityProbe stability_probe(const Mesh& mesh, const MaterialParams& params, const PreState& pre,
                               const ThermalBC& bc, const CollisionOptions& opts, const StabilityData& a,
                               const StabilityData& b) {
  const int n = mesh.num_nodes();
  auto field_or_zero = [n](const ScalarField& f) { return f.size() == 0 ? ScalarField(ScalarField::Zero(n)) : f; };
  auto pair_or_zero = [n](const PhasePair& h) { return h.rows() == 0 ? PhasePair(PhasePair::Zero(n, 2)) : h; };
  const ScalarField fa = field_or_zero(a.heat_source), fb = field_or_zero(b.heat_source);
  const PhasePair ha = pair_or_zero(a.phase_flux), hb = pair_or_zero(b.phase_flux);
  if (fa.size() != n || fb.size() != n || ha.rows() != n || hb.rows() != n)
    throw std::invalid_argument("stability_probe: data sizes do not match the mesh");
  if (a.load.region != b.load.region) throw std::invalid_argument("stability_probe: loads act on different regions");

  const SparseMatrix A = assemble_scalar_stiffness(mesh);
  const SparseMatrix B = assemble_boundary_mass(mesh);
  const SparseMatrix M = assemble_scalar_mass(mesh, false);
  double loaded_length = 0.0;
  for (const auto& e : boundary_edges_with_tag(mesh, a.load.region)) loaded_length += e.length;

  StabilityProbe out;
  const ScalarField df = fa - fb;
  const PhasePair dh = ha - hb;
  out.denominator = (a.load.vector() - b.load.vector()).norm() * std::sqrt(loaded_length) +
                    std::sqrt(std::max(0.0, df.dot(M * df)));
  for (int i = 0; i < 2; ++i) out.denominator += std::sqrt(std::max(0.0, dh.col(i).dot(B * dh.col(i))));
  if (!(out.denominator > 0.0)) throw std::invalid_argument("stability_probe: the two data sets coincide");

  auto run = [&](const StabilityData& d, const ScalarField& f, const PhasePair& h) {
    CollisionOptions o = opts;
    o.heat_source = f;
    o.phase_flux = h;
    auto r = solve_collision(mesh, params, pre, d.load, bc, o);
    if (!r.diagnostics.converged) throw NumericalError("stability_probe: a run did not converge");
    return r;
  };
  const auto ra = run(a, fa, ha);
  const auto rb = run(b, fb, hb);
  out.numerator = v_norm(A, B, ra.T_plus - rb.T_plus);
  for (int i = 1; i <= 2; ++i) out.numerator += v_norm(A, B, ra.beta_plus.col(i) - rb.beta_plus.col(i));
  out.ratio = out.numerator / out.denominator;
  return out;
}

}  // namespace smacollide
