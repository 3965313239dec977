#pragma once

#include "smacollide/coupling.hpp"
#include "smacollide/mesh.hpp"
#include "smacollide/types.hpp"

#include <numbers>
#include <random>

namespace test_support {

using namespace smacollide;

// Ni-Ti hammer stroke:, 1 mm square, 20 MPa s at 60 degrees, T- = 0.9 T0, beta- = (1/2, 1/2, 0)
struct Hammer {
  MaterialParams params = nickel_titanium();
  Mesh mesh;
  PreState pre;
  PercussionLoad load{20e6, std::numbers::pi / 3.0};

  explicit Hammer(int n = 100) : mesh(build_structured_mesh(n, n, 1e-3, 1e-3)) {
    pre = PreState::uniform(mesh, 0.9 * params.T0, {0.5, 0.5, 0.0});
  }
};

// nearest grid point of K at spacing h, brute force
inline Eigen::Vector2d grid_argmin_on_K(const auto& f, double h = 1e-3) {
  const int n = static_cast<int>(std::lround(1.0 / h));
  Eigen::Vector2d best(0, 0);
  double best_v = f(best);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const Eigen::Vector2d x(i * h, j * h);
      const double v = f(x);
      if (v < best_v) {
        best_v = v;
        best = x;
      }
    }
  return best;
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace test_support
