#pragma once

#include "smacollide/fem.hpp"
#include "smacollide/linalg.hpp"
#include "smacollide/mesh.hpp"
#include "smacollide/types.hpp"

namespace smacollide {

// Surface percussion G^p, constant over the tagged region.
struct PercussionLoad {
  double magnitude = 0.0;  // Pa s
  double angle = 0.0;      // radians from the horizontal
  BoundaryTag region = BoundaryTag::Gamma1;

  // |G| (cos a, -sin a): the stroke points into the body through the top face.
  Eigen::Vector2d vector() const { return magnitude * Eigen::Vector2d(std::cos(angle), -std::sin(angle)); }
};

// Dissipated work 2 k_v |D((U+ + U-)/2)|^2, J/m^3.
struct DissipationField {
  Eigen::VectorXd per_triangle;
  ScalarField nodal;  // lumped L2 projection
};

// Post-collision velocity: rho (U+ - U-) = k_v div D(U+ + U-), Sigma N = G on the loaded region,
// zero traction elsewhere, U+ = 0 on Gamma0.
VectorField solve_velocity(const Mesh& mesh, double rho, double k_v, const PercussionLoad& load,
                           const VectorField& U_minus, const LinearSolveOptions& opts = {},
                           SolveReport* report = nullptr);

// Same operator with an arbitrary assembled load (2N, interleaved) in place of the percussion.
VectorField solve_velocity(const Mesh& mesh, double rho, double k_v, const Eigen::VectorXd& load_vector,
                           const VectorField& U_minus, const LinearSolveOptions& opts = {},
                           SolveReport* report = nullptr);

DissipationField dissipated_work(const Mesh& mesh, const VectorField& U_plus, const VectorField& U_minus, double k_v);

// Spatially constant dissipated work, for the prescribed-work path.
DissipationField uniform_dissipation(const Mesh& mesh, double value);

// Nodal lumped projection of per-triangle constants.
ScalarField project_to_nodes(const Mesh& mesh, const Eigen::VectorXd& per_triangle);

}  // namespace smacollide
