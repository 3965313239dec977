#pragma once

#include "smacollide/types.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <map>

namespace smacollide {

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;  // ||b - A x|| / ||b||
  bool converged = false;
};

struct LinearSolveOptions {
  double tol = 1e-10;
  int max_iter = 0;  // 0 -> 10 * dimension
};

template <typename Scalar>
struct SpdSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  SolveReport report;
};

// Jacobi-preconditioned conjugate gradients for symmetric positive definite `a`.
//
// Stops when the true relative residual is below `opts.tol`. Throws std::invalid_argument on
// dimension mismatch and NumericalError when a search direction has nonpositive curvature.
template <typename Scalar, int Options>
SpdSolution<Scalar> solve_spd(const Eigen::SparseMatrix<Scalar, Options>& a,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, const LinearSolveOptions& opts = {},
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>* initial_guess = nullptr) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n || (initial_guess && initial_guess->size() != n))
    throw std::invalid_argument("solve_spd: dimension mismatch");

  SpdSolution<Scalar> out;
  const Scalar bnorm = b.norm();
  if (bnorm == Scalar(0)) {
    out.x = Vec::Zero(n);
    out.report = {0, 0.0, true};
    return out;
  }
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(10 * n);

  Vec inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar d = a.coeff(i, i);
    if (!(d > Scalar(0))) throw NumericalError("solve_spd: nonpositive diagonal entry at row " + std::to_string(i));
    inv_diag(i) = Scalar(1) / d;
  }

  Vec x = initial_guess ? *initial_guess : Vec::Zero(n);
  Vec r = b - a * x;
  int it = 0;
  // restart from the true residual if the recursive one drifted
  for (int pass = 0; pass < 3; ++pass) {
    Scalar res = r.norm() / bnorm;
    if (res <= opts.tol) break;
    Vec z = inv_diag.cwiseProduct(r);
    Vec p = z;
    Scalar rz = r.dot(z);
    while (it < max_iter) {
      const Vec ap = a * p;
      const Scalar curvature = p.dot(ap);
      if (!(curvature > Scalar(0)))
        throw NumericalError("solve_spd: nonpositive curvature, matrix is not positive definite");
      const Scalar alpha = rz / curvature;
      x += alpha * p;
      r -= alpha * ap;
      ++it;
      if (r.norm() / bnorm <= opts.tol) break;
      z = inv_diag.cwiseProduct(r);
      const Scalar rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    r = b - a * x;
    if (it >= max_iter) break;
  }
  out.x = std::move(x);
  out.report.iterations = it;
  out.report.final_residual = static_cast<double>(r.norm() / bnorm);
  out.report.converged = out.report.final_residual <= opts.tol;
  return out;
}

struct DirichletSystem {
  SparseMatrix a;
  Eigen::VectorXd b;
};

// Symmetric elimination of fixed dofs: rows and columns zeroed, unit diagonal, right-hand side
// corrected so the remaining system keeps its definiteness and x[i] = value exactly.
DirichletSystem apply_dirichlet(const SparseMatrix& a, const Eigen::VectorXd& b, const std::map<int, double>& fixed);

}  // namespace smacollide
