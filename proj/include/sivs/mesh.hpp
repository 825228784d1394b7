#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sivs {

template <typename Scalar>
using Point2T = Eigen::Matrix<Scalar, 2, 1>;
using Point2 = Point2T<double>;

enum class BoundaryTag : std::uint8_t { Lid, Wall };

const char* to_string(BoundaryTag tag);

struct BoundaryEdge {
  std::array<int, 2> vertices;
  int edge;  // index into TriMesh::edges
  BoundaryTag tag;
};

struct PointLocation {
  int triangle;
  Eigen::Vector3d barycentric;
};

/// Conforming triangulation of the unit square.
///
/// Vertex (i, j) sits at (i/n, j/n) with index j*(n+1) + i. Cell (i, j) is
/// split by its lower-left to upper-right diagonal into triangles 2c and 2c+1
/// (c = j*n + i), both counterclockwise. Edges are numbered in order of first
/// appearance while sweeping triangles; `triangle_edges[t][k]` is the edge
/// joining local vertices k and (k+1)%3.
class TriMesh {
 public:
  explicit TriMesh(int n);

  int resolution() const { return n_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& triangle_edges() const { return triangle_edges_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  double signed_area(int t) const;
  Point2 edge_midpoint(int e) const;

  /// Containing triangle of `p`; ties on shared edges go to the lowest index.
  PointLocation locate(const Point2& p) const;

  void write_csv(std::ostream& os) const;

 private:
  int n_;
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<BoundaryEdge> boundary_edges_;
};

TriMesh unit_square_mesh(int n);

/// Longest edge over all triangles.
double mesh_size(const TriMesh& mesh);

PointLocation locate_point(const TriMesh& mesh, const Point2& p);

}  // namespace sivs
