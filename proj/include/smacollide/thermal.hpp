#pragma once

#include "smacollide/fem.hpp"
#include "smacollide/linalg.hpp"
#include "smacollide/mesh.hpp"
#include "smacollide/types.hpp"
#include "smacollide/velocity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace smacollide {

enum class ThermalBCKind : std::uint8_t { Adiabatic, Robin };

// Adiabatic, or lambda dT/dn + h (T - T_ext) = 0 for the averaged temperature on the whole boundary.
struct ThermalBC {
  ThermalBCKind kind = ThermalBCKind::Adiabatic;
  double h_coeff = 0.0;  // W s/(K m^2)
  double T_ext = 0.0;    // K

  bool operator==(const ThermalBC&) const = default;
};

struct ThermalSolution {
  ScalarField T_plus;
  SolveReport report;
  std::vector<std::string> warnings;
};

// Energy balance with the averaged temperature (T+ + T-)/2 in the conduction term:
//   C M_L d + (lambda/2) A d + (h/2) B d = M_L (diss + f - l_a [beta3]) - lambda A T- - h B T- + h T_ext B 1,
// d = T+ - T-. The matrix is assembled and kept for repeated solves.
class ThermalSolver {
 public:
  ThermalSolver(const Mesh& mesh, const MaterialParams& params, const ThermalBC& bc);

  // `source` is an optional extra volumetric heat f (J/m^3), nodal.
  ThermalSolution solve(const ScalarField& T_minus, const ScalarField& beta3_plus, const ScalarField& beta3_minus,
                        const ScalarField& diss_nodal, const LinearSolveOptions& opts = {},
                        const ScalarField* source = nullptr, const ScalarField* guess = nullptr) const;

  const Eigen::VectorXd& lumped_mass() const { return m_; }

 private:
  MaterialParams params_;
  ThermalBC bc_;
  SparseMatrix A_, B_, lhs_;
  Eigen::VectorXd m_;
};

ScalarField solve_thermal(const Mesh& mesh, const ScalarField& T_minus, const ScalarField& beta3_plus,
                          const ScalarField& beta3_minus, const DissipationField& diss, const MaterialParams& params,
                          const ThermalBC& bc, const LinearSolveOptions& opts = {});

}  // namespace smacollide
