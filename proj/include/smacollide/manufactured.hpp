#pragma once

#include <vector>

namespace smacollide {

struct ConvergenceStudy {
  std::vector<int> cells;       // nx = ny per level
  std::vector<double> errors;   // L2 error
  std::vector<double> rates;    // log2(e_k / e_{k+1}), one fewer than levels
};

// Unit square, rho = k_v = 1, clamped bottom, exact traction elsewhere;
// U = (sin(pi x / 2) sin(pi y / 2), cos(pi x / 2) sin(pi y / 2)).
ConvergenceStudy velocity_convergence(const std::vector<int>& cells);

// Unit square, C = lambda = 1, adiabatic; T+ = 1 + cos(pi x) cos(pi y) / 2 from T- = 1.
ConvergenceStudy thermal_convergence(const std::vector<int>& cells);

// 8, 16, 32, ... (`levels` entries).
std::vector<int> refinement_levels(int levels, int coarsest = 8);

}  // namespace smacollide
