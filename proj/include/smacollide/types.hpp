#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace smacollide {

// Nodal scalar field (temperature in K, fractions dimensionless, ...).
using ScalarField = Eigen::VectorXd;
// Nodal 2D vector field, one row per node (velocities in m/s).
using VectorField = Eigen::Matrix<double, Eigen::Dynamic, 2>;
// Nodal volume fractions (beta1, beta2, beta3), one row per node.
using PhaseFractions = Eigen::Matrix<double, Eigen::Dynamic, 3>;
// Nodal (chi2, chi3) = (beta2, beta3) pairs, one row per node.
using PhasePair = Eigen::Matrix<double, Eigen::Dynamic, 2>;
// Nodal reaction densities (xi2, xi3) in J/m^3.
using ReactionPair = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Compressed sparse row matrix.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Raised when an iterative or direct solve cannot proceed (breakdown, singular system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when element assembly meets a degenerate triangle.
class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(int triangle, const std::string& what)
      : std::runtime_error("triangle " + std::to_string(triangle) + ": " + what), triangle_(triangle) {}
  int triangle() const { return triangle_; }

 private:
  int triangle_;
};

// Which reduction of the phase equations is solved.
//
// UniformDissipation: one viscosity c for all three phases; after eliminating beta1 the
// operator acting on (chi2, chi3) is multiplied by [[2,1],[1,2]].
// ReducedDissipation: phase 1 carries no dissipation or interfacial energy; the
// coupling matrix is the identity.
enum class PhaseVariant { UniformDissipation, ReducedDissipation };

// Constitutive constants, SI units.
struct MaterialParams {
  double rho = 0.0;             // kg/m^3
  double k_v = 0.0;             // Pa s, macroscopic collision viscosity
  double c = 0.0;               // J/m^3, phase-jump viscosity
  double upsilon = 0.0;         // J/m, viscosity of grad[beta]
  double kappa = 0.0;           // J/m, interfacial energy coefficient k
  double lambda = 0.0;          // W s/(K m), impulsive conductivity
  double heat_capacity = 0.0;   // J/(m^3 K), C
  double latent_heat = 0.0;     // J/m^3, l_a
  double T0 = 0.0;              // K, phase change temperature
  PhaseVariant variant = PhaseVariant::UniformDissipation;

  bool operator==(const MaterialParams&) const = default;
};

// Ni-Ti parameters of the reference percussion experiment (c = 0.05 l_a, k = upsilon = 0.5 N).
inline MaterialParams nickel_titanium() {
  MaterialParams p;
  p.rho = 6500.0;
  p.k_v = 1.0e6;
  p.latent_heat = 80.0e6;
  p.c = 0.05 * p.latent_heat;
  p.upsilon = 0.5;
  p.kappa = 0.5;
  p.lambda = 18.0;
  p.heat_capacity = 5.4e6;
  p.T0 = 332.75;
  return p;
}

}  // namespace smacollide
