#include "smacollide/phase.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace smacollide {

Eigen::Vector3d project_onto_simplex(const Eigen::Vector3d& b) {
  std::array<double, 3> s{b(0), b(1), b(2)};
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (int k = 0; k < 3; ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / (k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  return (b.array() - theta).cwiseMax(0.0).matrix();
}

Eigen::Matrix2d phase_coupling_matrix(PhaseVariant variant) {
  if (variant == PhaseVariant::ReducedDissipation) return Eigen::Matrix2d::Identity();
  Eigen::Matrix2d w;
  w << 2.0, 1.0, 1.0, 2.0;
  return w;
}

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

Eigen::Vector2d vertex_of(KRegion r) {
  switch (r) {
    case KRegion::VertexChi2One: return {1.0, 0.0};
    case KRegion::VertexChi3One: return {0.0, 1.0};
    default: return {0.0, 0.0};
  }
}

std::size_t hash_regions(const std::vector<KRegion>& r) {
  std::size_t h = 1469598103934665603ull;
  for (KRegion k : r) h = (h ^ static_cast<std::size_t>(k)) * 1099511628211ull;
  return h;
}

}  // namespace

struct PhaseSolver::Impl {
  int n = 0;
  MaterialParams params;
  Eigen::Matrix2d W;
  SparseMatrix A, B, S, L;
  Eigen::VectorXd m;

  // cached reduced system
  std::vector<KRegion> cached_regions;
  ColMatrix Z;
  Eigen::VectorXd base;
  Eigen::SimplicialLDLT<ColMatrix> ldlt;
  bool has_cache = false;

  void build_reduced(const std::vector<KRegion>& regions) {
    if (has_cache && regions == cached_regions) return;
    std::vector<Eigen::Triplet<double>> trip;
    base = Eigen::VectorXd::Zero(2 * n);
    int col = 0;
    for (int i = 0; i < n; ++i) {
      switch (regions[i]) {
        case KRegion::Interior:
          trip.emplace_back(2 * i, col++, 1.0);
          trip.emplace_back(2 * i + 1, col++, 1.0);
          break;
        case KRegion::EdgeChi2Zero: trip.emplace_back(2 * i + 1, col++, 1.0); break;
        case KRegion::EdgeChi3Zero: trip.emplace_back(2 * i, col++, 1.0); break;
        case KRegion::EdgeSum:
          base(2 * i) = 1.0;
          trip.emplace_back(2 * i, col, -1.0);
          trip.emplace_back(2 * i + 1, col++, 1.0);
          break;
        default: base.segment<2>(2 * i) = vertex_of(regions[i]); break;
      }
    }
    Z.resize(2 * n, col);
    Z.setFromTriplets(trip.begin(), trip.end());
    if (col > 0) {
      const ColMatrix Lc = L;
      const ColMatrix reduced = Z.transpose() * Lc * Z;
      ldlt.compute(reduced);
      if (ldlt.info() != Eigen::Success) throw NumericalError("phase: reduced system factorization failed");
    }
    cached_regions = regions;
    has_cache = true;
  }

  Eigen::VectorXd reactions(const Eigen::VectorXd& rhs, const Eigen::VectorXd& chi) const {
    Eigen::VectorXd r = rhs - L * chi;
    for (int i = 0; i < n; ++i) r.segment<2>(2 * i) /= m(i);
    return r;
  }

  std::vector<KRegion> classify(const Eigen::VectorXd& chi, const Eigen::VectorXd& xi) const {
    std::vector<KRegion> out(n);
    for (int i = 0; i < n; ++i) {
      const double sigma = m(i) / S.coeff(i, i);
      const Eigen::Vector2d z = chi.segment<2>(2 * i) + sigma * xi.segment<2>(2 * i);
      out[i] = project_onto_K_with_region(z).region;
    }
    return out;
  }

  // returns passes used; converged when the active set repeats itself
  int active_set(const Eigen::VectorXd& rhs, Eigen::VectorXd& chi, int max_pass, bool& converged) {
    std::vector<KRegion> regions = classify(chi, reactions(rhs, chi));
    std::unordered_set<std::size_t> seen{hash_regions(regions)};
    converged = false;
    int pass = 0;
    while (pass < max_pass) {
      ++pass;
      build_reduced(regions);
      chi = base;
      if (Z.cols() > 0) {
        const Eigen::VectorXd y = ldlt.solve(Z.transpose() * (rhs - L * base));
        chi += Z * y;
      }
      const auto next = classify(chi, reactions(rhs, chi));
      if (next == regions) {
        converged = true;
        break;
      }
      if (!seen.insert(hash_regions(next)).second) break;  // cycling
      regions = next;
    }
    return pass;
  }

  int gauss_seidel(const Eigen::VectorXd& rhs, Eigen::VectorXd& chi, double tol, int max_sweeps, bool& converged) {
    converged = false;
    int sweep = 0;
    while (sweep < max_sweeps) {
      ++sweep;
      double max_update = 0.0;
      for (int i = 0; i < n; ++i) {
        Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
        Eigen::Vector2d g;
        for (int a = 0; a < 2; ++a) {
          const int row = 2 * i + a;
          double s = rhs(row);
          for (SparseMatrix::InnerIterator it(L, row); it; ++it) {
            const int c = static_cast<int>(it.col());
            if (c / 2 == i)
              H(a, c - 2 * i) = it.value();
            else
              s -= it.value() * chi(c);
          }
          g(a) = s;
        }
        const Eigen::Vector2d x = minimize_quadratic_on_K(H, g).x;
        max_update = std::max(max_update, (x - chi.segment<2>(2 * i)).cwiseAbs().maxCoeff());
        chi.segment<2>(2 * i) = x;
      }
      if (max_update <= tol * (1.0 + chi.cwiseAbs().maxCoeff())) {
        converged = true;
        break;
      }
    }
    return sweep;
  }
};

PhaseSolver::PhaseSolver(const Mesh& mesh, const MaterialParams& params) : impl_(std::make_unique<Impl>()) {
  auto& d = *impl_;
  if (!(params.c >= 0.0) || !(params.upsilon >= 0.0) || !(params.kappa >= 0.0))
    throw std::invalid_argument("PhaseSolver: c, upsilon and kappa must be >= 0");
  if (!(params.T0 > 0.0)) throw std::invalid_argument("PhaseSolver: T0 must be > 0");
  if (!(params.c > 0.0) && !(params.upsilon + params.kappa > 0.0))
    throw std::invalid_argument("PhaseSolver: c = 0 together with upsilon + kappa = 0 leaves no operator");
  d.n = mesh.num_nodes();
  d.params = params;
  d.W = phase_coupling_matrix(params.variant);
  d.A = assemble_scalar_stiffness(mesh);
  d.B = assemble_boundary_mass(mesh);
  d.m = smacollide::lumped_mass(mesh);
  SparseMatrix ml(d.n, d.n);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < d.n; ++i) t.emplace_back(i, i, d.m(i));
    ml.setFromTriplets(t.begin(), t.end());
  }
  d.S = params.c * ml + (params.upsilon + params.kappa) * d.A;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * d.S.nonZeros());
  for (int r = 0; r < d.n; ++r)
    for (SparseMatrix::InnerIterator it(d.S, r); it; ++it)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (d.W(a, b) != 0.0) trip.emplace_back(2 * r + a, 2 * static_cast<int>(it.col()) + b, it.value() * d.W(a, b));
  d.L.resize(2 * d.n, 2 * d.n);
  d.L.setFromTriplets(trip.begin(), trip.end());
  d.L.makeCompressed();
}

PhaseSolver::~PhaseSolver() = default;
PhaseSolver::PhaseSolver(PhaseSolver&&) noexcept = default;
PhaseSolver& PhaseSolver::operator=(PhaseSolver&&) noexcept = default;

const Eigen::VectorXd& PhaseSolver::lumped_mass() const { return impl_->m; }

PhaseSolution PhaseSolver::solve(const ScalarField& T_plus, const PhasePair& chi_minus, const PhaseSolveOptions& opts,
                                 const PhasePair* flux, const PhasePair* guess) {
  auto& d = *impl_;
  const int n = d.n;
  if (T_plus.size() != n || chi_minus.rows() != n) throw std::invalid_argument("phase: field sizes do not match the mesh");
  if (!T_plus.allFinite()) throw std::invalid_argument("phase: T+ is not finite");
  if (feasibility_violation(chi_minus) > 1e-12) throw std::invalid_argument("phase: beta- leaves the admissible triangle");
  if (flux && flux->rows() != n) throw std::invalid_argument("phase: flux size does not match the mesh");
  if (guess && guess->rows() != n) throw std::invalid_argument("phase: guess size does not match the mesh");

  const auto& p = d.params;
  const double scale = p.latent_heat / p.T0;
  Eigen::MatrixXd prev = p.c * (d.m.asDiagonal() * chi_minus) + p.upsilon * (d.A * chi_minus);
  if (flux) prev += d.B * (*flux);
  prev = prev * d.W;  // W symmetric
  Eigen::VectorXd rhs(2 * n);
  for (int i = 0; i < n; ++i) {
    rhs(2 * i) = prev(i, 0);
    rhs(2 * i + 1) = prev(i, 1) + scale * d.m(i) * (T_plus(i) - p.T0);
  }

  Eigen::VectorXd chi(2 * n);
  const PhasePair& start = guess ? *guess : chi_minus;
  for (int i = 0; i < n; ++i) chi.segment<2>(2 * i) = project_onto_K(Eigen::Vector2d(start.row(i).transpose()));

  PhaseSolution out;
  bool converged = false;
  int iterations = 0;
  if (opts.method == PhaseMethod::ActiveSet) {
    iterations = d.active_set(rhs, chi, opts.max_iter > 0 ? opts.max_iter : 100, converged);
    if (!converged) {
      for (int i = 0; i < n; ++i) chi.segment<2>(2 * i) = project_onto_K(Eigen::Vector2d(chi.segment<2>(2 * i)));
      bool gs_ok = false;
      iterations += d.gauss_seidel(rhs, chi, opts.tol, static_cast<int>(200 * std::sqrt(double(n))) + 1, gs_ok);
      converged = gs_ok;
    }
  } else {
    const int max_sweeps = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(200 * std::sqrt(double(n))) + 1;
    iterations = d.gauss_seidel(rhs, chi, opts.tol, max_sweeps, converged);
  }

  // rounding can leave free nodes a few ulps outside K
  for (int i = 0; i < n; ++i) chi.segment<2>(2 * i) = project_onto_K(Eigen::Vector2d(chi.segment<2>(2 * i)));
  const Eigen::VectorXd xi = d.reactions(rhs, chi);

  out.chi.resize(n, 2);
  out.xi.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    out.chi.row(i) = chi.segment<2>(2 * i).transpose();
    out.xi.row(i) = xi.segment<2>(2 * i).transpose();
  }
  out.load_norm = scale * (T_plus.array() - p.T0).abs().maxCoeff();
  out.complementarity = complementarity_residual(out.chi, out.xi);
  out.report.iterations = iterations;
  out.report.final_residual = out.complementarity / (1.0 + out.load_norm);
  out.report.converged = converged;
  return out;
}

PhaseSolution solve_phase_vi(const Mesh& mesh, const ScalarField& T_plus, const PhaseFractions& beta_minus,
                             const MaterialParams& params, const PhaseSolveOptions& opts, const PhasePair* flux) {
  PhaseSolver solver(mesh, params);
  return solver.solve(T_plus, chi_from_beta(beta_minus), opts, flux);
}

double complementarity_residual(const PhasePair& chi, const ReactionPair& xi) {
  if (chi.rows() != xi.rows()) throw std::invalid_argument("complementarity_residual: size mismatch");
  const std::array<Eigen::Vector2d, 3> vertices{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  double worst = 0.0;
  for (Eigen::Index i = 0; i < chi.rows(); ++i)
    for (const auto& v : vertices)
      worst = std::max(worst, xi.row(i).dot(v.transpose() - chi.row(i)));
  return worst;
}

double feasibility_violation(const PhasePair& chi) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < chi.rows(); ++i) {
    worst = std::max({worst, -chi(i, 0), -chi(i, 1), chi(i, 0) + chi(i, 1) - 1.0});
  }
  return worst;
}

PhasePair chi_from_beta(const PhaseFractions& beta) {
  for (Eigen::Index i = 0; i < beta.rows(); ++i) {
    if (std::abs(beta.row(i).sum() - 1.0) > 1e-12 || beta.row(i).minCoeff() < -1e-12)
      throw std::invalid_argument("beta at node " + std::to_string(i) + " is not a point of the simplex");
  }
  return beta.rightCols<2>();
}

PhaseFractions beta_from_chi(const PhasePair& chi) {
  PhaseFractions beta(chi.rows(), 3);
  beta.col(0) = 1.0 - chi.col(0).array() - chi.col(1).array();
  beta.rightCols<2>() = chi;
  return beta;
}

}  // namespace smacollide
