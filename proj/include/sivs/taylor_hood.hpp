#pragma once

#include "sivs/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <vector>

namespace sivs {

// Reference P2 shape functions in barycentric coordinates. Local ordering:
// vertices 0,1,2 then edge midpoints (0,1), (1,2), (2,0).

template <typename Scalar>
Eigen::Matrix<Scalar, 6, 1> p2_values(const Eigen::Matrix<Scalar, 3, 1>& lam) {
  Eigen::Matrix<Scalar, 6, 1> phi;
  for (int k = 0; k < 3; ++k) {
    phi(k) = lam(k) * (Scalar(2) * lam(k) - Scalar(1));
    phi(3 + k) = Scalar(4) * lam(k) * lam((k + 1) % 3);
  }
  return phi;
}

/// Row i holds grad phi_i, given the (constant) barycentric gradients.
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 2> p2_gradients(const Eigen::Matrix<Scalar, 3, 1>& lam,
                                         const Eigen::Matrix<Scalar, 3, 2>& grad_lam) {
  Eigen::Matrix<Scalar, 6, 2> g;
  for (int k = 0; k < 3; ++k) {
    const int k1 = (k + 1) % 3;
    g.row(k) = (Scalar(4) * lam(k) - Scalar(1)) * grad_lam.row(k);
    g.row(3 + k) = Scalar(4) * (lam(k1) * grad_lam.row(k) + lam(k) * grad_lam.row(k1));
  }
  return g;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 2> barycentric_gradients(const Point2T<Scalar>& a, const Point2T<Scalar>& b,
                                                  const Point2T<Scalar>& c) {
  const Scalar twice_area = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  Eigen::Matrix<Scalar, 3, 2> g;
  g << b.y() - c.y(), c.x() - b.x(),
       c.y() - a.y(), a.x() - c.x(),
       a.y() - b.y(), b.x() - a.x();
  return g / twice_area;
}

using VectorField = std::function<Eigen::Vector2d(const Point2&)>;
using ScalarField = std::function<double(const Point2&)>;

/// Dirichlet velocity data, one function per boundary tag.
struct DirichletData {
  std::map<BoundaryTag, VectorField> by_tag;

  static DirichletData homogeneous();
};

/// P2 velocity / P1 pressure dof layout.
///
/// Scalar P2 dofs: vertices first (mesh numbering), then edge midpoints
/// (offset by #vertices). Velocity dofs are blocked by component: x-dofs
/// occupy [0, Ns), y-dofs [Ns, 2 Ns). Pressure dofs are the mesh vertices.
class TaylorHoodSpace {
 public:
  explicit TaylorHoodSpace(TriMesh mesh);

  const TriMesh& mesh() const { return mesh_; }
  int num_scalar_dofs() const { return num_scalar_; }
  int num_velocity_dofs() const { return 2 * num_scalar_; }
  int num_pressure_dofs() const { return mesh_.num_vertices(); }
  int num_free() const { return static_cast<int>(free_.size()); }
  int num_constrained() const { return static_cast<int>(constrained_.size()); }

  int velocity_dof(int component, int scalar_dof) const { return component * num_scalar_ + scalar_dof; }
  std::array<int, 6> cell_dofs(int t) const;
  Point2 scalar_dof_point(int s) const;

  /// Sorted velocity dofs, partitioning [0, n_u).
  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& constrained_dofs() const { return constrained_; }
  /// Boundary tag of each entry of constrained_dofs().
  const std::vector<BoundaryTag>& constrained_tags() const { return constrained_tags_; }
  /// Full velocity dof -> position in free_dofs(), or -1.
  const std::vector<int>& free_index() const { return free_index_; }
  /// Full velocity dof -> position in constrained_dofs(), or -1.
  const std::vector<int>& constrained_index() const { return constrained_index_; }

 private:
  TriMesh mesh_;
  int num_scalar_;
  std::vector<int> free_, constrained_;
  std::vector<BoundaryTag> constrained_tags_;
  std::vector<int> free_index_, constrained_index_;
};

TaylorHoodSpace build_space(const TriMesh& mesh);

}  // namespace sivs
