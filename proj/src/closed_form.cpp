#include "smacollide/closed_form.hpp"

#include "smacollide/phase.hpp"

#include <limits>

namespace smacollide {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::NoTransformation: return "NoTransformation";
    case Regime::Mixture: return "Mixture";
    case Regime::FullAustenite: return "FullAustenite";
  }
  return "?";
}

ClosedFormSolution solve_0d(const ClosedFormInput& in) {
  const auto& p = in.params;
  return solve_0d<double>(in.T_minus, in.beta_minus, in.diss, p.c, p.heat_capacity, p.latent_heat, p.T0);
}

namespace {

struct NodalProblem {
  double T_minus, diss, c, C, l_a, T0, sigma;
  Eigen::Vector2d chi_minus;
  Eigen::Matrix2d W;

  explicit NodalProblem(const ClosedFormInput& in) {
    const auto& p = in.params;
    T_minus = in.T_minus;
    diss = in.diss;
    c = p.c;
    C = p.heat_capacity;
    l_a = p.latent_heat;
    T0 = p.T0;
    chi_minus = in.beta_minus.tail<2>();
    W = phase_coupling_matrix(PhaseVariant::UniformDissipation);
    sigma = 1.0 / (3.0 * c + l_a * l_a / (C * T0));
  }

  double temperature(const Eigen::Vector2d& chi) const { return T_minus + (diss - l_a * (chi(1) - chi_minus(1))) / C; }

  double residual(const Eigen::Vector2d& chi) const {
    const Eigen::Vector2d G = c * (W * (chi - chi_minus)) - Eigen::Vector2d(0.0, l_a / T0 * (temperature(chi) - T0));
    return (chi - project_onto_K(Eigen::Vector2d(chi - sigma * G))).norm();
  }
};

void validate(const ClosedFormInput& in) {
  const auto& p = in.params;
  if (!(in.T_minus > 0.0)) throw std::invalid_argument("brute_force_0d: T_minus must be > 0");
  if (!(in.diss >= 0.0)) throw std::invalid_argument("brute_force_0d: dissipated work must be >= 0");
  if (!(p.heat_capacity > 0.0) || !(p.latent_heat > 0.0) || !(p.T0 > 0.0) || !(p.c >= 0.0))
    throw std::invalid_argument("brute_force_0d: need C, l_a, T0 > 0 and c >= 0");
  if (std::abs(in.beta_minus.sum() - 1.0) > 1e-12 || in.beta_minus.minCoeff() < 0.0)
    throw std::invalid_argument("brute_force_0d: beta_minus must lie in the simplex");
}

}  // namespace

double kkt_residual_0d(const ClosedFormInput& in, const Eigen::Vector2d& chi) {
  validate(in);
  return NodalProblem(in).residual(chi);
}

ClosedFormSolution brute_force_0d(const ClosedFormInput& in) {
  validate(in);
  const NodalProblem prob(in);

  Eigen::Vector2d best(0.0, 0.0);
  double best_r = std::numeric_limits<double>::infinity();
  const int coarse = 1000;
  for (int i = 0; i <= coarse; ++i) {
    for (int j = 0; i + j <= coarse; ++j) {
      const Eigen::Vector2d x(double(i) / coarse, double(j) / coarse);
      const double r = prob.residual(x);
      if (r < best_r) {
        best_r = r;
        best = x;
      }
    }
  }
  double h_prev = 1.0 / coarse;
  for (double h : {1e-4, 1e-5, 1e-6, 1e-7}) {
    const int half = static_cast<int>(std::lround(2.0 * h_prev / h));
    const Eigen::Vector2d center = best;
    for (int i = -half; i <= half; ++i) {
      for (int j = -half; j <= half; ++j) {
        const Eigen::Vector2d x = project_onto_K(Eigen::Vector2d(center + h * Eigen::Vector2d(i, j)));
        const double r = prob.residual(x);
        if (r < best_r) {
          best_r = r;
          best = x;
        }
      }
    }
    h_prev = h;
  }

  ClosedFormSolution s;
  s.T_plus = prob.temperature(best);
  s.beta_plus << 1.0 - best(0) - best(1), best(0), best(1);
  if (best(1) <= 1e-9)
    s.regime = Regime::NoTransformation;
  else if (best(1) >= 1.0 - 1e-9)
    s.regime = Regime::FullAustenite;
  else
    s.regime = Regime::Mixture;
  return s;
}

std::vector<SweepRow> sweep_0d(double T_minus, const Eigen::Vector3d& beta_minus, const MaterialParams& params,
                               double diss_min, double diss_max, int samples) {
  if (samples < 1) throw std::invalid_argument("sweep_0d: samples must be >= 1");
  if (!(diss_min >= 0.0) || !(diss_max >= diss_min)) throw std::invalid_argument("sweep_0d: need 0 <= diss_min <= diss_max");
  std::vector<SweepRow> rows;
  const int count = diss_max == diss_min ? 1 : samples;
  rows.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double d = count == 1 ? diss_min : diss_min + (diss_max - diss_min) * k / (count - 1);
    const auto s = solve_0d<double>(T_minus, beta_minus, d, params.c, params.heat_capacity, params.latent_heat, params.T0);
    rows.push_back({d, s.T_plus, s.beta_plus(2), s.regime});
  }
  return rows;
}

}  // namespace smacollide
