#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace smacollide {

enum class BoundaryTag : std::uint8_t { Gamma0, Gamma1, GammaFree };

std::string_view to_string(BoundaryTag tag);

enum class Side : std::uint8_t { Bottom, Right, Top, Left };

// A segment of one side of the rectangle, given as fractions of the side length.
// Bottom/top are parametrized by x/W, left/right by y/H. An empty side selects nothing.
struct BoundaryRegion {
  std::optional<Side> side;
  double start = 0.0;
  double end = 1.0;

  // True when the point (parameter `s` along `on_side`) lies in the region.
  bool contains(Side on_side, double s) const {
    return side && *side == on_side && s >= start && s <= end;
  }
  bool operator==(const BoundaryRegion&) const = default;
};

// Default layout: clamped bottom face, load on the middle third of the top face.
struct BoundarySpec {
  BoundaryRegion gamma0{Side::Bottom, 0.0, 1.0};
  BoundaryRegion gamma1{Side::Top, 1.0 / 3.0, 2.0 / 3.0};

  bool operator==(const BoundarySpec&) const = default;
};

// Forward: every cell split along its lower-left to upper-right diagonal.
// Symmetric: cells left of the vertical midline use that diagonal, cells right of it the
// mirrored one, so the mesh is invariant under x -> W - x (requires even nx).
enum class DiagonalPattern : std::uint8_t { Forward, Symmetric };

struct BoundaryEdge {
  std::array<int, 2> nodes;
  BoundaryTag tag;
  int triangle;  // owning triangle
};

// Triangulated rectangle [0,W]x[0,H]. Immutable once built.
struct Mesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;
  double width = 0.0;
  double height = 0.0;

  int num_nodes() const { return static_cast<int>(nodes.rows()); }
  int num_triangles() const { return static_cast<int>(triangles.rows()); }
  Eigen::Vector2d node(int i) const { return nodes.row(i).transpose(); }
};

// Boundary edge with geometry resolved.
struct EdgeGeometry {
  std::array<int, 2> nodes;
  Eigen::Vector2d normal;  // outward unit normal
  double length;
};

// Structured (nx+1)x(ny+1) grid, 2 nx ny right triangles, boundary tagged by edge midpoint.
// Gamma0 wins where the two regions overlap. Throws std::invalid_argument on bad sizes.
Mesh build_structured_mesh(int nx, int ny, double width, double height, const BoundarySpec& spec = {},
                           DiagonalPattern pattern = DiagonalPattern::Forward);

std::vector<EdgeGeometry> boundary_edges_with_tag(const Mesh& mesh, BoundaryTag tag);
std::vector<EdgeGeometry> all_boundary_edges(const Mesh& mesh);

// Sorted, unique node indices touching edges with the given tag.
std::vector<int> nodes_with_tag(const Mesh& mesh, BoundaryTag tag);

// Signed area of triangle `t` (positive for counterclockwise orientation).
double signed_area(const Mesh& mesh, int t);

// Checks every invariant of Mesh; throws std::invalid_argument describing the first violation.
void validate(const Mesh& mesh);

}  // namespace smacollide
