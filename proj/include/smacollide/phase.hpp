#pragma once

#include "smacollide/fem.hpp"
#include "smacollide/linalg.hpp"
#include "smacollide/mesh.hpp"
#include "smacollide/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace smacollide {

// ---------------------------------------------------------------------------
// The triangle K = {x2 >= 0, x3 >= 0, x2 + x3 <= 1}
// ---------------------------------------------------------------------------

enum class KRegion : std::uint8_t {
  Interior,
  EdgeChi2Zero,   // x2 = 0
  EdgeChi3Zero,   // x3 = 0
  EdgeSum,        // x2 + x3 = 1
  VertexOrigin,   // (0, 0)
  VertexChi2One,  // (1, 0)
  VertexChi3One,  // (0, 1)
};

template <typename Scalar>
struct KPoint {
  Eigen::Matrix<Scalar, 2, 1> x;
  KRegion region;
};

// Minimizer of 0.5 x'Hx - g'x over K for symmetric positive definite H.
// The unconstrained minimizer is returned when feasible, otherwise the best of the three
// edge-restricted minimizers (vertices are reached by clamping).
template <typename Scalar>
KPoint<Scalar> minimize_quadratic_on_K(const Eigen::Matrix<Scalar, 2, 2>& H, const Eigen::Matrix<Scalar, 2, 1>& g) {
  using V = Eigen::Matrix<Scalar, 2, 1>;
  const Scalar zero(0), one(1);
  const Scalar det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
  const V u((H(1, 1) * g(0) - H(0, 1) * g(1)) / det, (H(0, 0) * g(1) - H(1, 0) * g(0)) / det);
  if (u(0) > zero && u(1) > zero && u(0) + u(1) < one) return {u, KRegion::Interior};

  auto energy = [&](const V& x) { return Scalar(0.5) * x.dot(H * x) - g.dot(x); };

  struct Edge {
    V a, d;
    KRegion at0, open, at1;
  };
  const std::array<Edge, 3> edges{{
      {V(zero, zero), V(zero, one), KRegion::VertexOrigin, KRegion::EdgeChi2Zero, KRegion::VertexChi3One},
      {V(zero, zero), V(one, zero), KRegion::VertexOrigin, KRegion::EdgeChi3Zero, KRegion::VertexChi2One},
      {V(one, zero), V(-one, one), KRegion::VertexChi2One, KRegion::EdgeSum, KRegion::VertexChi3One},
  }};
  KPoint<Scalar> best{V::Zero(), KRegion::VertexOrigin};
  Scalar best_e = energy(best.x);
  for (const auto& e : edges) {
    Scalar t = e.d.dot(g - H * e.a) / e.d.dot(H * e.d);
    KPoint<Scalar> cand;
    if (!(t > zero)) {
      cand = {e.a, e.at0};
    } else if (!(t < one)) {
      cand = {e.a + e.d, e.at1};
    } else if (e.open == KRegion::EdgeSum) {
      cand = {V(one - t, t), e.open};
    } else {
      cand = {e.a + t * e.d, e.open};
    }
    const Scalar ce = energy(cand.x);
    if (ce < best_e) {
      best = cand;
      best_e = ce;
    }
  }
  return best;
}

// Euclidean nearest point of K together with the face it lies on.
template <typename Scalar>
KPoint<Scalar> project_onto_K_with_region(const Eigen::Matrix<Scalar, 2, 1>& p) {
  return minimize_quadratic_on_K<Scalar>(Eigen::Matrix<Scalar, 2, 2>::Identity(), p);
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> project_onto_K(const Eigen::Matrix<Scalar, 2, 1>& p) {
  return project_onto_K_with_region(p).x;
}

inline Eigen::Vector2d project_onto_K(double x2, double x3) { return project_onto_K(Eigen::Vector2d(x2, x3)); }

// Euclidean nearest point of the 3D face {b >= 0, b1 + b2 + b3 = 1}: sort-and-threshold simplex
// projection, independent of the K reduction.
Eigen::Vector3d project_onto_simplex(const Eigen::Vector3d& b);

// [[2,1],[1,2]] for UniformDissipation, identity for ReducedDissipation.
Eigen::Matrix2d phase_coupling_matrix(PhaseVariant variant);

// ---------------------------------------------------------------------------
// Phase variational inequality on a mesh
// ---------------------------------------------------------------------------

enum class PhaseMethod : std::uint8_t { ActiveSet, BlockGaussSeidel };

struct PhaseSolveOptions {
  double tol = 1e-10;
  int max_iter = 0;  // 0 -> method default (active-set: 100 passes, Gauss-Seidel: 200 sqrt(N) sweeps)
  PhaseMethod method = PhaseMethod::ActiveSet;
};

struct PhaseSolution {
  PhasePair chi;      // (beta2+, beta3+)
  ReactionPair xi;    // reaction densities, J/m^3
  SolveReport report; // final_residual = complementarity / (1 + |load|_inf)
  double complementarity = 0.0;
  double load_norm = 0.0;  // max (l_a/T0)|T+ - T0|
};

// Reusable solver: operator assembled once per mesh and material, reduced factorizations cached
// between calls with an unchanged active set.
//
// Discrete problem (interleaved dofs 2n, 2n+1):
//   (S (x) W) chi + (M_L (x) I) xi = ((c M_L + upsilon A) (x) W) chi- + (0, (l_a/T0) M_L (T+ - T0))
//                                    + (B (x) W) h,
//   S = c M_L + (upsilon + k) A,  xi_n in N_K(chi_n) at every node.
class PhaseSolver {
 public:
  PhaseSolver(const Mesh& mesh, const MaterialParams& params);
  ~PhaseSolver();
  PhaseSolver(PhaseSolver&&) noexcept;
  PhaseSolver& operator=(PhaseSolver&&) noexcept;

  // `flux` is the boundary datum h (N x 2, per node), `guess` a warm start.
  PhaseSolution solve(const ScalarField& T_plus, const PhasePair& chi_minus, const PhaseSolveOptions& opts = {},
                      const PhasePair* flux = nullptr, const PhasePair* guess = nullptr);

  const Eigen::VectorXd& lumped_mass() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PhaseSolution solve_phase_vi(const Mesh& mesh, const ScalarField& T_plus, const PhaseFractions& beta_minus,
                             const MaterialParams& params, const PhaseSolveOptions& opts = {},
                             const PhasePair* flux = nullptr);

// max over nodes and vertices p of K of max(0, xi_n . (p - chi_n)).
double complementarity_residual(const PhasePair& chi, const ReactionPair& xi);

// Largest violation of x2 >= 0, x3 >= 0, x2 + x3 <= 1 over nodes (0 when feasible).
double feasibility_violation(const PhasePair& chi);

// Columns 1 and 2 of beta; throws std::invalid_argument when rows leave the simplex by more than 1e-12.
PhasePair chi_from_beta(const PhaseFractions& beta);
PhaseFractions beta_from_chi(const PhasePair& chi);

}  // namespace smacollide
