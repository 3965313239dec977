#include "smacollide/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace smacollide {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Gamma0: return "Gamma0";
    case BoundaryTag::Gamma1: return "Gamma1";
    case BoundaryTag::GammaFree: return "GammaFree";
  }
  return "?";
}

namespace {

BoundaryTag classify(const BoundarySpec& spec, Side side, double s) {
  if (spec.gamma0.contains(side, s)) return BoundaryTag::Gamma0;
  if (spec.gamma1.contains(side, s)) return BoundaryTag::Gamma1;
  return BoundaryTag::GammaFree;
}

}  // namespace

Mesh build_structured_mesh(int nx, int ny, double width, double height, const BoundarySpec& spec,
                           DiagonalPattern pattern) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_structured_mesh: cell counts must be >= 1");
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("build_structured_mesh: width and height must be positive");
  if (pattern == DiagonalPattern::Symmetric && nx % 2 != 0)
    throw std::invalid_argument("build_structured_mesh: symmetric pattern needs an even nx");

  Mesh mesh;
  mesh.width = width;
  mesh.height = height;

  const int stride = nx + 1;
  auto id = [stride](int i, int j) { return j * stride + i; };

  mesh.nodes.resize((nx + 1) * (ny + 1), 2);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // i == nx reproduces `width` exactly
      mesh.nodes(id(i, j), 0) = width * static_cast<double>(i) / nx;
      mesh.nodes(id(i, j), 1) = height * static_cast<double>(j) / ny;
    }
  }

  mesh.triangles.resize(2 * nx * ny, 3);
  // cell (i,j) -> triangles 2*(j*nx+i) and 2*(j*nx+i)+1; the first one always holds the bottom
  // edge, the second the top edge, and the left/right edges are owned as recorded below.
  int t = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
      const bool mirrored = pattern == DiagonalPattern::Symmetric && i >= nx / 2;
      if (!mirrored) {
        mesh.triangles.row(t++) << n00, n10, n11;  // holds bottom and right edges
        mesh.triangles.row(t++) << n00, n11, n01;  // holds top and left edges
      } else {
        mesh.triangles.row(t++) << n00, n10, n01;  // bottom and left
        mesh.triangles.row(t++) << n10, n11, n01;  // right and top
      }
    }
  }

  auto cell_tri = [&](int i, int j, bool upper) { return 2 * (j * nx + i) + (upper ? 1 : 0); };
  auto mirrored = [&](int i) { return pattern == DiagonalPattern::Symmetric && i >= nx / 2; };

  // Counterclockwise walk around the boundary.
  for (int i = 0; i < nx; ++i) {
    const double s = (i + 0.5) / nx;
    mesh.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, classify(spec, Side::Bottom, s), cell_tri(i, 0, false)});
  }
  for (int j = 0; j < ny; ++j) {
    const double s = (j + 0.5) / ny;
    const int owner = cell_tri(nx - 1, j, mirrored(nx - 1));
    mesh.boundary_edges.push_back({{id(nx, j), id(nx, j + 1)}, classify(spec, Side::Right, s), owner});
  }
  for (int i = nx - 1; i >= 0; --i) {
    const double s = (i + 0.5) / nx;
    mesh.boundary_edges.push_back({{id(i + 1, ny), id(i, ny)}, classify(spec, Side::Top, s), cell_tri(i, ny - 1, true)});
  }
  for (int j = ny - 1; j >= 0; --j) {
    const double s = (j + 0.5) / ny;
    const int owner = cell_tri(0, j, !mirrored(0));
    mesh.boundary_edges.push_back({{id(0, j + 1), id(0, j)}, classify(spec, Side::Left, s), owner});
  }
  return mesh;
}

double signed_area(const Mesh& mesh, int t) {
  const Eigen::Vector2d a = mesh.node(mesh.triangles(t, 0));
  const Eigen::Vector2d b = mesh.node(mesh.triangles(t, 1));
  const Eigen::Vector2d c = mesh.node(mesh.triangles(t, 2));
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

namespace {

EdgeGeometry edge_geometry(const Mesh& mesh, const BoundaryEdge& e) {
  const Eigen::Vector2d a = mesh.node(e.nodes[0]);
  const Eigen::Vector2d b = mesh.node(e.nodes[1]);
  const Eigen::Vector2d d = b - a;
  const double length = d.norm();
  Eigen::Vector2d n(d.y(), -d.x());
  n /= length;
  // orient away from the opposite vertex of the owning triangle
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (int k = 0; k < 3; ++k) centroid += mesh.node(mesh.triangles(e.triangle, k));
  centroid /= 3.0;
  if (n.dot(0.5 * (a + b) - centroid) < 0.0) n = -n;
  return {e.nodes, n, length};
}

}  // namespace

std::vector<EdgeGeometry> boundary_edges_with_tag(const Mesh& mesh, BoundaryTag tag) {
  std::vector<EdgeGeometry> out;
  for (const auto& e : mesh.boundary_edges)
    if (e.tag == tag) out.push_back(edge_geometry(mesh, e));
  return out;
}

std::vector<EdgeGeometry> all_boundary_edges(const Mesh& mesh) {
  std::vector<EdgeGeometry> out;
  out.reserve(mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) out.push_back(edge_geometry(mesh, e));
  return out;
}

std::vector<int> nodes_with_tag(const Mesh& mesh, BoundaryTag tag) {
  std::vector<int> out;
  for (const auto& e : mesh.boundary_edges)
    if (e.tag == tag) out.insert(out.end(), e.nodes.begin(), e.nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate(const Mesh& mesh) {
  const int n = mesh.num_nodes();
  const double slack = 1e-12 * std::max(mesh.width, mesh.height);
  for (int i = 0; i < n; ++i) {
    const double x = mesh.nodes(i, 0), y = mesh.nodes(i, 1);
    if (x < -slack || x > mesh.width + slack || y < -slack || y > mesh.height + slack)
      throw std::invalid_argument("node " + std::to_string(i) + " lies outside the rectangle");
  }
  // edge -> owning triangles
  std::map<std::pair<int, int>, std::vector<int>> owners;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles(t, k);
      if (v < 0 || v >= n) throw std::invalid_argument("triangle " + std::to_string(t) + " has a bad node index");
    }
    if (!(signed_area(mesh, t) > 0.0))
      throw std::invalid_argument("triangle " + std::to_string(t) + " has nonpositive signed area");
    for (int k = 0; k < 3; ++k) {
      int a = mesh.triangles(t, k), b = mesh.triangles(t, (k + 1) % 3);
      owners[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }
  std::size_t open_edges = 0;
  for (const auto& [edge, tris] : owners) {
    if (tris.size() > 2) throw std::invalid_argument("edge shared by more than two triangles");
    if (tris.size() == 1) ++open_edges;
  }
  if (open_edges != mesh.boundary_edges.size())
    throw std::invalid_argument("boundary edge list does not match the open edges of the triangulation");
  for (const auto& e : mesh.boundary_edges) {
    const auto key = std::make_pair(std::min(e.nodes[0], e.nodes[1]), std::max(e.nodes[0], e.nodes[1]));
    auto it = owners.find(key);
    if (it == owners.end() || it->second.size() != 1 || it->second.front() != e.triangle)
      throw std::invalid_argument("boundary edge (" + std::to_string(e.nodes[0]) + "," + std::to_string(e.nodes[1]) +
                                  ") is not owned by exactly one triangle");
  }
}

}  // namespace smacollide
