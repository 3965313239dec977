#pragma once

#include "smacollide/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace smacollide {

enum class Regime : std::uint8_t { NoTransformation, Mixture, FullAustenite };

std::string_view to_string(Regime r);

// Homogeneous collision: T-, beta- = (b1, b2, b3), dissipated work (J/m^3) and the constants c, C, l_a, T0.
struct ClosedFormInput {
  double T_minus = 0.0;
  Eigen::Vector3d beta_minus{0.5, 0.5, 0.0};
  double diss = 0.0;
  MaterialParams params;
};

template <typename Scalar>
struct ClosedFormSolutionT {
  Regime regime = Regime::NoTransformation;
  Scalar T_plus{};
  Eigen::Matrix<Scalar, 3, 1> beta_plus;
};
using ClosedFormSolution = ClosedFormSolutionT<double>;

// Dissipated-work interval of the mixture regime, for symmetric beta- = (a, a, b).
template <typename Scalar>
std::pair<Scalar, Scalar> mixture_window(Scalar T_minus, Scalar b, Scalar c, Scalar C, Scalar l_a, Scalar T0) {
  const Scalar inv_kappa = Scalar(3) * c * T0 / (Scalar(2) * l_a);  // temperature span of the mixture
  const Scalar lo = C * (T0 - b * inv_kappa - T_minus) - l_a * b;
  const Scalar hi = C * (T0 + (Scalar(1) - b) * inv_kappa - T_minus) + l_a * (Scalar(1) - b);
  return {lo, hi};
}

// Exact piecewise solution for symmetric beta- (b1 = b2). Boundary cases go to the regime with
// beta3+ in {0, 1}.
template <typename Scalar>
ClosedFormSolutionT<Scalar> solve_0d(Scalar T_minus, const Eigen::Matrix<Scalar, 3, 1>& beta_minus, Scalar diss,
                                     Scalar c, Scalar C, Scalar l_a, Scalar T0) {
  using std::abs;
  if (!(T_minus > Scalar(0))) throw std::invalid_argument("solve_0d: T_minus must be > 0");
  if (!(diss >= Scalar(0))) throw std::invalid_argument("solve_0d: dissipated work must be >= 0");
  if (!(C > Scalar(0)) || !(l_a > Scalar(0)) || !(T0 > Scalar(0)) || !(c >= Scalar(0)))
    throw std::invalid_argument("solve_0d: need C, l_a, T0 > 0 and c >= 0");
  if (abs(beta_minus.sum() - Scalar(1)) > Scalar(1e-12) || beta_minus.minCoeff() < Scalar(0) ||
      beta_minus.maxCoeff() > Scalar(1))
    throw std::invalid_argument("solve_0d: beta_minus must lie in the simplex");
  if (abs(beta_minus(0) - beta_minus(1)) > Scalar(1e-12))
    throw std::invalid_argument("solve_0d: beta1- and beta2- differ, no closed form (use brute_force_0d)");

  const Scalar b = beta_minus(2);
  const auto [lo, hi] = mixture_window(T_minus, b, c, C, l_a, T0);
  ClosedFormSolutionT<Scalar> s;
  Scalar b3;
  if (diss <= lo) {
    s.regime = Regime::NoTransformation;
    b3 = Scalar(0);
    s.T_plus = T_minus + (diss + l_a * b) / C;
  } else if (diss >= hi) {
    s.regime = Regime::FullAustenite;
    b3 = Scalar(1);
    s.T_plus = T_minus + (diss - l_a * (Scalar(1) - b)) / C;
  } else {
    s.regime = Regime::Mixture;
    if (c == Scalar(0)) {
      // no phase dissipation: the mixture sits at the transition temperature
      s.T_plus = T0;
      b3 = b + (diss - C * (T0 - T_minus)) / l_a;
    } else {
      const Scalar kappa = Scalar(2) * l_a / (Scalar(3) * c * T0);
      s.T_plus = (diss + C * T_minus + Scalar(2) * l_a * l_a / (Scalar(3) * c)) / (C + l_a * kappa);
      b3 = b + kappa * (s.T_plus - T0);
    }
  }
  const Scalar b12 = (Scalar(1) - b3) / Scalar(2);
  s.beta_plus << b12, b12, b3;
  return s;
}

ClosedFormSolution solve_0d(const ClosedFormInput& in);

// Natural residual |chi - P_K(chi - sigma G(chi))| of the UniformDissipation nodal problem, with
// T+ eliminated through C (T+ - T-) + l_a (chi3 - beta3-) = diss.
double kkt_residual_0d(const ClosedFormInput& in, const Eigen::Vector2d& chi);

// Exhaustive search over K: 1e-3 grid, then windows at 1e-4 ... 1e-7 around the best point.
// Accepts any beta- in the simplex. Regime from beta3+ (within 1e-9 of 0 or 1).
ClosedFormSolution brute_force_0d(const ClosedFormInput& in);

struct SweepRow {
  double diss;
  double T_plus;
  double beta3;
  Regime regime;
};

// `samples` evenly spaced work values in [diss_min, diss_max] (one row when they coincide).
std::vector<SweepRow> sweep_0d(double T_minus, const Eigen::Vector3d& beta_minus, const MaterialParams& params,
                               double diss_min, double diss_max, int samples);

}  // namespace smacollide
