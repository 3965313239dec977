#include "smacollide/thermal.hpp"

#include <stdexcept>

namespace smacollide {

ThermalSolver::ThermalSolver(const Mesh& mesh, const MaterialParams& params, const ThermalBC& bc)
    : params_(params), bc_(bc) {
  if (bc.kind == ThermalBCKind::Robin && (!(bc.h_coeff >= 0.0) || !(bc.T_ext > 0.0)))
    throw std::invalid_argument("thermal: Robin data needs h_coeff >= 0 and T_ext > 0");
  if (!(params.heat_capacity >= 0.0) || !(params.lambda >= 0.0))
    throw std::invalid_argument("thermal: C and lambda must be >= 0");
  const bool robin_anchor = bc.kind == ThermalBCKind::Robin && bc.h_coeff > 0.0 && params.lambda > 0.0;
  if (!(params.heat_capacity > 0.0) && !robin_anchor)
    throw std::invalid_argument("thermal: C = 0 without a Robin exchange makes the system singular");

  A_ = assemble_scalar_stiffness(mesh);
  B_ = assemble_boundary_mass(mesh);
  m_ = smacollide::lumped_mass(mesh);
  SparseMatrix ml(mesh.num_nodes(), mesh.num_nodes());
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < mesh.num_nodes(); ++i) t.emplace_back(i, i, m_(i));
  ml.setFromTriplets(t.begin(), t.end());
  lhs_ = params.heat_capacity * ml + (0.5 * params.lambda) * A_;
  if (bc.kind == ThermalBCKind::Robin) lhs_ += (0.5 * bc.h_coeff) * B_;
  lhs_.makeCompressed();
}

ThermalSolution ThermalSolver::solve(const ScalarField& T_minus, const ScalarField& beta3_plus,
                                     const ScalarField& beta3_minus, const ScalarField& diss_nodal,
                                     const LinearSolveOptions& opts, const ScalarField* source,
                                     const ScalarField* guess) const {
  const Eigen::Index n = m_.size();
  if (T_minus.size() != n || beta3_plus.size() != n || beta3_minus.size() != n || diss_nodal.size() != n ||
      (source && source->size() != n))
    throw std::invalid_argument("thermal: field sizes do not match the mesh");
  if (T_minus.minCoeff() <= 0.0) throw std::invalid_argument("thermal: T- must be positive");

  Eigen::VectorXd density = diss_nodal - params_.latent_heat * (beta3_plus - beta3_minus);
  if (source) density += *source;
  // A 1 = 0, so shifting T- by a constant changes nothing but the rounding
  Eigen::VectorXd rhs = m_.cwiseProduct(density) - params_.lambda * (A_ * (T_minus.array() - T_minus(0)).matrix());
  if (bc_.kind == ThermalBCKind::Robin && bc_.h_coeff > 0.0)
    rhs += bc_.h_coeff * (B_ * (Eigen::VectorXd::Constant(n, bc_.T_ext) - T_minus));

  Eigen::VectorXd d0;
  if (guess) d0 = *guess - T_minus;
  const auto sol = solve_spd(lhs_, rhs, opts, guess ? &d0 : nullptr);
  if (!sol.report.converged)
    throw NumericalError("thermal: PCG stopped at relative residual " + std::to_string(sol.report.final_residual));

  ThermalSolution out;
  out.T_plus = T_minus + sol.x;
  out.report = sol.report;
  if (out.T_plus.minCoeff() <= 0.0)
    out.warnings.push_back("T+ has non-positive values (min " + std::to_string(out.T_plus.minCoeff()) + " K)");
  return out;
}

ScalarField solve_thermal(const Mesh& mesh, const ScalarField& T_minus, const ScalarField& beta3_plus,
                          const ScalarField& beta3_minus, const DissipationField& diss, const MaterialParams& params,
                          const ThermalBC& bc, const LinearSolveOptions& opts) {
  return ThermalSolver(mesh, params, bc).solve(T_minus, beta3_plus, beta3_minus, diss.nodal, opts).T_plus;
}

}  // namespace smacollide
