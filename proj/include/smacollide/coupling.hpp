#pragma once

#include "smacollide/linalg.hpp"
#include "smacollide/mesh.hpp"
#include "smacollide/phase.hpp"
#include "smacollide/thermal.hpp"
#include "smacollide/types.hpp"
#include "smacollide/velocity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smacollide {

// Fields just before the collision.
struct PreState {
  ScalarField T_minus;
  PhaseFractions beta_minus;
  VectorField U_minus;

  // Uniform state with U- = 0.
  static PreState uniform(const Mesh& mesh, double T_minus, const Eigen::Vector3d& beta_minus);
};

struct FixedPointConfig {
  double tol = 1e-8;
  int max_iter = 200;
  double relaxation = 1.0;

  bool operator==(const FixedPointConfig&) const = default;
};

struct CollisionOptions {
  FixedPointConfig fp;
  LinearSolveOptions linear;
  PhaseSolveOptions phase;
  // Skip the velocity solve and use this dissipated work instead.
  std::optional<DissipationField> prescribed_diss;
  // Extra volumetric heat f (J/m^3, nodal).
  std::optional<ScalarField> heat_source;
  // Boundary flux data h for (chi2, chi3).
  std::optional<PhasePair> phase_flux;
  // Starting (beta2, beta3) for the fixed point; beta- when empty.
  std::optional<PhasePair> initial_guess;
};

struct CollisionDiagnostics {
  bool converged = false;
  int iterations = 0;
  std::vector<double> update_T;     // max |dT| / (1 + |T|) per iteration
  std::vector<double> update_beta;  // max |d beta| per iteration
  double relaxation = 1.0;          // final value
  SolveReport velocity;
  std::vector<SolveReport> thermal;
  std::vector<SolveReport> phase;
  double complementarity = 0.0;
  double phase_load_norm = 0.0;
  std::vector<std::string> warnings;
};

struct CollisionResult {
  VectorField U_plus;
  ScalarField T_plus;
  PhaseFractions beta_plus;
  ReactionPair reactions;
  DissipationField diss;
  CollisionDiagnostics diagnostics;
};

// Velocity first (it does not depend on temperature or phases), then the thermal/phase fixed
// point started from beta-. The returned temperature is recomputed from the final beta3+, so the
// discrete energy balance holds to linear-solver accuracy; reactions belong to the last phase solve.
CollisionResult solve_collision(const Mesh& mesh, const MaterialParams& params, const PreState& pre,
                                const PercussionLoad& load, const ThermalBC& bc, const CollisionOptions& opts = {});

// One data set of the stability estimate.
struct StabilityData {
  PercussionLoad load;
  ScalarField heat_source;  // f, nodal; empty means zero
  PhasePair phase_flux;     // h, nodal; empty means zero
};

struct StabilityProbe {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

// (|T1-T2|_V + sum_i |chi_i1 - chi_i2|_V) / (|g1-g2|_{L2(Gamma1)} + sum_i |h_i1 - h_i2|_{L2(Gamma)} + |f1-f2|_{L2}),
// |v|_V^2 = |grad v|^2 + |v|^2_{L2(boundary)}. Throws std::invalid_argument for a zero denominator and
// NumericalError when either run fails to converge.
StabilityProbe stability_probe(const Mesh& mesh, const MaterialParams& params, const PreState& pre,
                               const ThermalBC& bc, const CollisionOptions& opts, const StabilityData& a,
                               const StabilityData& b);

}  // namespace smacollide
