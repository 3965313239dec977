#pragma once

#include "smacollide/mesh.hpp"
#include "smacollide/types.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>

namespace smacollide {

// ---------------------------------------------------------------------------
// P1 element kernels. Vertices are the rows of `xy` (counterclockwise).
// ---------------------------------------------------------------------------

template <typename Scalar>
using TriangleVertices = Eigen::Matrix<Scalar, 3, 2>;

template <typename Scalar>
Scalar triangle_area(const TriangleVertices<Scalar>& xy) {
  return Scalar(0.5) * ((xy(1, 0) - xy(0, 0)) * (xy(2, 1) - xy(0, 1)) - (xy(2, 0) - xy(0, 0)) * (xy(1, 1) - xy(0, 1)));
}

// Constant gradients of the three barycentric basis functions (one per row).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 2> p1_gradients(const TriangleVertices<Scalar>& xy) {
  const Scalar two_area = Scalar(2) * triangle_area(xy);
  Eigen::Matrix<Scalar, 3, 2> g;
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    g(k, 0) = (xy(a, 1) - xy(b, 1)) / two_area;
    g(k, 1) = (xy(b, 0) - xy(a, 0)) / two_area;
  }
  return g;
}

// int grad(phi_i) . grad(phi_j); entries computed so that K(i,j) and K(j,i) are bitwise equal.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> p1_stiffness_element(const TriangleVertices<Scalar>& xy) {
  const Scalar area = triangle_area(xy);
  const auto g = p1_gradients(xy);
  Eigen::Matrix<Scalar, 3, 3> k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k(i, j) = area * (g(i, 0) * g(j, 0) + g(i, 1) * g(j, 1));
  return k;
}

// Consistent mass (A/12)[[2,1,1],[1,2,1],[1,1,2]].
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> p1_mass_element(const TriangleVertices<Scalar>& xy) {
  const Scalar a12 = triangle_area(xy) / Scalar(12);
  Eigen::Matrix<Scalar, 3, 3> m;
  m.setConstant(a12);
  m.diagonal().setConstant(Scalar(2) * a12);
  return m;
}

// int eps(u):eps(v) on one triangle; local dofs ordered (u0x,u0y,u1x,u1y,u2x,u2y).
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 6> p1_elastic_element(const TriangleVertices<Scalar>& xy) {
  const Scalar area = triangle_area(xy);
  const auto g = p1_gradients(xy);
  // rows: eps11, eps22, sqrt(2) eps12, so that eps:eps = |B u|^2
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  Eigen::Matrix<Scalar, 3, 6> B = Eigen::Matrix<Scalar, 3, 6>::Zero();
  for (int k = 0; k < 3; ++k) {
    B(0, 2 * k) = g(k, 0);
    B(1, 2 * k + 1) = g(k, 1);
    B(2, 2 * k) = r * g(k, 1);
    B(2, 2 * k + 1) = r * g(k, 0);
  }
  Eigen::Matrix<Scalar, 6, 6> k;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) k(i, j) = area * (B(0, i) * B(0, j) + B(1, i) * B(1, j) + B(2, i) * B(2, j));
  return k;
}

// ---------------------------------------------------------------------------
// Global assembly. Triangles are visited in index order; results are reproducible bit for bit.
// Vector problems use interleaved dofs: (node n, component d) -> 2n + d.
// ---------------------------------------------------------------------------

TriangleVertices<double> triangle_vertices(const Mesh& mesh, int t);

SparseMatrix assemble_scalar_stiffness(const Mesh& mesh);
SparseMatrix assemble_scalar_mass(const Mesh& mesh, bool lumped);
// Row sums of the consistent mass matrix (the lumped mass diagonal).
Eigen::VectorXd lumped_mass(const Mesh& mesh);
// Consistent vector mass on interleaved dofs.
SparseMatrix assemble_vector_mass(const Mesh& mesh);
SparseMatrix assemble_elastic_stiffness(const Mesh& mesh);

// Consistent P1 trace mass over the tagged edges (all boundary edges when `tag` is empty).
SparseMatrix assemble_boundary_mass(const Mesh& mesh, std::optional<BoundaryTag> tag = std::nullopt);

// Load vector (2N) of scale * int_{Gamma_tag} g . v for constant g.
Eigen::VectorXd assemble_boundary_traction(const Mesh& mesh, BoundaryTag tag, const Eigen::Vector2d& g,
                                           double scale = 1.0);
// Same with one constant vector per tagged edge, in boundary_edges_with_tag order.
Eigen::VectorXd assemble_boundary_traction(const Mesh& mesh, BoundaryTag tag, std::span<const Eigen::Vector2d> g,
                                           double scale = 1.0);

// Traction as a function of position and outward normal.
using TractionFunction = std::function<Eigen::Vector2d(const Eigen::Vector2d& x, const Eigen::Vector2d& normal)>;
// Three-point Gauss integration per edge over every edge whose tag is in `tags`.
Eigen::VectorXd assemble_boundary_traction(const Mesh& mesh, std::span<const BoundaryTag> tags, const TractionFunction& g,
                                           double scale = 1.0);

// int f phi_i with a degree-5 seven-point rule.
Eigen::VectorXd assemble_volume_load(const Mesh& mesh, const std::function<double(const Eigen::Vector2d&)>& f);
// int f . v (2N, interleaved).
Eigen::VectorXd assemble_vector_volume_load(const Mesh& mesh,
                                            const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f);

// Seven-point degree-5 rule on a triangle: barycentric coordinates and weights (summing to 1).
struct TriangleQuadraturePoint {
  std::array<double, 3> bary;
  double weight;
};
std::span<const TriangleQuadraturePoint> triangle_quadrature();

// L2 norm of (u_h - u_exact) with u_h the P1 field given by nodal values.
double l2_error(const Mesh& mesh, const ScalarField& values, const std::function<double(const Eigen::Vector2d&)>& exact);
double l2_error(const Mesh& mesh, const VectorField& values,
                const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& exact);

}  // namespace smacollide
