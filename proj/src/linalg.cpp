#include "smacollide/linalg.hpp"

#include <vector>

namespace smacollide {

DirichletSystem apply_dirichlet(const SparseMatrix& a, const Eigen::VectorXd& b, const std::map<int, double>& fixed) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("apply_dirichlet: dimension mismatch");
  if (fixed.empty()) return {a, b};

  std::vector<char> is_fixed(n, 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (const auto& [i, v] : fixed) {
    if (i < 0 || i >= n) throw std::invalid_argument("apply_dirichlet: index " + std::to_string(i) + " out of range");
    is_fixed[i] = 1;
    values(i) = v;
  }

  DirichletSystem out;
  out.b = b - a * values;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.nonZeros());
  for (int r = 0; r < n; ++r) {
    if (is_fixed[r]) {
      trip.emplace_back(r, r, 1.0);
      out.b(r) = values(r);
      continue;
    }
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
      if (!is_fixed[it.col()]) trip.emplace_back(r, static_cast<int>(it.col()), it.value());
  }
  out.a.resize(n, n);
  out.a.setFromTriplets(trip.begin(), trip.end());
  out.a.makeCompressed();
  return out;
}

}  // namespace smacollide
