#include "smacollide/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace smacollide {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// degenerate if |area| is tiny relative to the squared longest edge
void check_triangle(const TriangleVertices<double>& xy, int t) {
  const double area = triangle_area(xy);
  double longest = 0.0;
  for (int k = 0; k < 3; ++k) longest = std::max(longest, (xy.row((k + 1) % 3) - xy.row(k)).squaredNorm());
  if (!(area > 1e-14 * longest)) throw AssemblyError(t, "degenerate or inverted triangle (area " + std::to_string(area) + ")");
}

SparseMatrix finish(int n, const Triplets& trip) {
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  a.prune([](int, int, double v) { return std::abs(v) > 1e-300; });
  a.makeCompressed();
  return a;
}

}  // namespace

TriangleVertices<double> triangle_vertices(const Mesh& mesh, int t) {
  TriangleVertices<double> xy;
  for (int k = 0; k < 3; ++k) xy.row(k) = mesh.nodes.row(mesh.triangles(t, k));
  return xy;
}

SparseMatrix assemble_scalar_stiffness(const Mesh& mesh) {
  Triplets trip;
  trip.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    check_triangle(xy, t);
    const auto ke = p1_stiffness_element(xy);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(mesh.triangles(t, i), mesh.triangles(t, j), ke(i, j));
  }
  return finish(mesh.num_nodes(), trip);
}

SparseMatrix assemble_scalar_mass(const Mesh& mesh, bool lumped) {
  Triplets trip;
  trip.reserve((lumped ? 3 : 9) * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    check_triangle(xy, t);
    const auto me = p1_mass_element(xy);
    for (int i = 0; i < 3; ++i) {
      if (lumped) {
        trip.emplace_back(mesh.triangles(t, i), mesh.triangles(t, i), me.row(i).sum());
        continue;
      }
      for (int j = 0; j < 3; ++j) trip.emplace_back(mesh.triangles(t, i), mesh.triangles(t, j), me(i, j));
    }
  }
  return finish(mesh.num_nodes(), trip);
}

Eigen::VectorXd lumped_mass(const Mesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    check_triangle(xy, t);
    const auto me = p1_mass_element(xy);
    for (int i = 0; i < 3; ++i) m(mesh.triangles(t, i)) += me.row(i).sum();
  }
  return m;
}

SparseMatrix assemble_vector_mass(const Mesh& mesh) {
  Triplets trip;
  trip.reserve(18 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    check_triangle(xy, t);
    const auto me = p1_mass_element(xy);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int d = 0; d < 2; ++d) trip.emplace_back(2 * mesh.triangles(t, i) + d, 2 * mesh.triangles(t, j) + d, me(i, j));
  }
  return finish(2 * mesh.num_nodes(), trip);
}

SparseMatrix assemble_elastic_stiffness(const Mesh& mesh) {
  Triplets trip;
  trip.reserve(36 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    check_triangle(xy, t);
    const auto ke = p1_elastic_element(xy);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        trip.emplace_back(2 * mesh.triangles(t, i / 2) + i % 2, 2 * mesh.triangles(t, j / 2) + j % 2, ke(i, j));
  }
  return finish(2 * mesh.num_nodes(), trip);
}

SparseMatrix assemble_boundary_mass(const Mesh& mesh, std::optional<BoundaryTag> tag) {
  Triplets trip;
  const auto edges = tag ? boundary_edges_with_tag(mesh, *tag) : all_boundary_edges(mesh);
  for (const auto& e : edges) {
    const double l6 = e.length / 6.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) trip.emplace_back(e.nodes[i], e.nodes[j], (i == j ? 2.0 : 1.0) * l6);
  }
  return finish(mesh.num_nodes(), trip);
}

Eigen::VectorXd assemble_boundary_traction(const Mesh& mesh, BoundaryTag tag, const Eigen::Vector2d& g, double scale) {
  const auto edges = boundary_edges_with_tag(mesh, tag);
  std::vector<Eigen::Vector2d> per_edge(edges.size(), g);
  return assemble_boundary_traction(mesh, tag, per_edge, scale);
}

Eigen::VectorXd assemble_boundary_traction(const Mesh& mesh, BoundaryTag tag, std::span<const Eigen::Vector2d> g,
                                           double scale) {
  const auto edges = boundary_edges_with_tag(mesh, tag);
  if (g.size() != edges.size())
    throw std::invalid_argument("assemble_boundary_traction: one traction per tagged edge expected");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Eigen::Vector2d half = 0.5 * scale * edges[k].length * g[k];
    for (int node : edges[k].nodes) f.segment<2>(2 * node) += half;
  }
  return f;
}

Eigen::VectorXd assemble_boundary_traction(const Mesh& mesh, std::span<const BoundaryTag> tags, const TractionFunction& g,
                                           double scale) {
  const double s = 0.5 * std::sqrt(3.0 / 5.0);
  const std::array<double, 3> pts{0.5 - s, 0.5, 0.5 + s};
  const std::array<double, 3> wts{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  for (BoundaryTag tag : tags) {
    for (const auto& e : boundary_edges_with_tag(mesh, tag)) {
      const Eigen::Vector2d a = mesh.node(e.nodes[0]), b = mesh.node(e.nodes[1]);
      for (int q = 0; q < 3; ++q) {
        const Eigen::Vector2d x = (1.0 - pts[q]) * a + pts[q] * b;
        const Eigen::Vector2d val = scale * wts[q] * e.length * g(x, e.normal);
        f.segment<2>(2 * e.nodes[0]) += (1.0 - pts[q]) * val;
        f.segment<2>(2 * e.nodes[1]) += pts[q] * val;
      }
    }
  }
  return f;
}

std::span<const TriangleQuadraturePoint> triangle_quadrature() {
  static const std::array<TriangleQuadraturePoint, 7> rule = [] {
    const double r = std::sqrt(15.0);
    const double a1 = (6.0 - r) / 21.0, w1 = (155.0 - r) / 1200.0;
    const double a2 = (6.0 + r) / 21.0, w2 = (155.0 + r) / 1200.0;
    return std::array<TriangleQuadraturePoint, 7>{{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
        {{a1, a1, 1.0 - 2.0 * a1}, w1},
        {{a1, 1.0 - 2.0 * a1, a1}, w1},
        {{1.0 - 2.0 * a1, a1, a1}, w1},
        {{a2, a2, 1.0 - 2.0 * a2}, w2},
        {{a2, 1.0 - 2.0 * a2, a2}, w2},
        {{1.0 - 2.0 * a2, a2, a2}, w2},
    }};
  }();
  return rule;
}

Eigen::VectorXd assemble_volume_load(const Mesh& mesh, const std::function<double(const Eigen::Vector2d&)>& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    const double area = triangle_area(xy);
    for (const auto& q : triangle_quadrature()) {
      const Eigen::Vector2d x = q.bary[0] * xy.row(0) + q.bary[1] * xy.row(1) + q.bary[2] * xy.row(2);
      const double fx = f(x);
      for (int k = 0; k < 3; ++k) load(mesh.triangles(t, k)) += q.weight * area * q.bary[k] * fx;
    }
  }
  return load;
}

Eigen::VectorXd assemble_vector_volume_load(const Mesh& mesh,
                                            const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    const double area = triangle_area(xy);
    for (const auto& q : triangle_quadrature()) {
      const Eigen::Vector2d x = q.bary[0] * xy.row(0) + q.bary[1] * xy.row(1) + q.bary[2] * xy.row(2);
      const Eigen::Vector2d fx = f(x);
      for (int k = 0; k < 3; ++k) load.segment<2>(2 * mesh.triangles(t, k)) += q.weight * area * q.bary[k] * fx;
    }
  }
  return load;
}

double l2_error(const Mesh& mesh, const ScalarField& values, const std::function<double(const Eigen::Vector2d&)>& exact) {
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    const double area = triangle_area(xy);
    for (const auto& q : triangle_quadrature()) {
      const Eigen::Vector2d x = q.bary[0] * xy.row(0) + q.bary[1] * xy.row(1) + q.bary[2] * xy.row(2);
      double uh = 0.0;
      for (int k = 0; k < 3; ++k) uh += q.bary[k] * values(mesh.triangles(t, k));
      const double e = uh - exact(x);
      sum += q.weight * area * e * e;
    }
  }
  return std::sqrt(sum);
}

double l2_error(const Mesh& mesh, const VectorField& values,
                const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& exact) {
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto xy = triangle_vertices(mesh, t);
    const double area = triangle_area(xy);
    for (const auto& q : triangle_quadrature()) {
      const Eigen::Vector2d x = q.bary[0] * xy.row(0) + q.bary[1] * xy.row(1) + q.bary[2] * xy.row(2);
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) uh += q.bary[k] * values.row(mesh.triangles(t, k)).transpose();
      sum += q.weight * area * (uh - exact(x)).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

}  // namespace smacollide
