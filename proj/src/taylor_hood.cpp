#include "sivs/taylor_hood.hpp"

#include <optional>

namespace sivs {

DirichletData DirichletData::homogeneous() {
  DirichletData bc;
  const VectorField zero = [](const Point2&) { return Eigen::Vector2d::Zero().eval(); };
  bc.by_tag[BoundaryTag::Lid] = zero;
  bc.by_tag[BoundaryTag::Wall] = zero;
  return bc;
}

TaylorHoodSpace::TaylorHoodSpace(TriMesh mesh)
    : mesh_(std::move(mesh)), num_scalar_(mesh_.num_vertices() + mesh_.num_edges()) {
  const int nv = mesh_.num_vertices();
  std::vector<std::optional<BoundaryTag>> scalar_tag(num_scalar_);
  for (int v = 0; v < nv; ++v) {
    const Point2& p = mesh_.vertices()[v];
    if (p.y() == 1.0)
      scalar_tag[v] = BoundaryTag::Lid;
    else if (p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0)
      scalar_tag[v] = BoundaryTag::Wall;
  }
  for (const auto& be : mesh_.boundary_edges()) scalar_tag[nv + be.edge] = be.tag;

  const int nu = num_velocity_dofs();
  free_index_.assign(nu, -1);
  constrained_index_.assign(nu, -1);
  for (int d = 0; d < nu; ++d) {
    const auto& tag = scalar_tag[d % num_scalar_];
    if (tag) {
      constrained_index_[d] = static_cast<int>(constrained_.size());
      constrained_.push_back(d);
      constrained_tags_.push_back(*tag);
    } else {
      free_index_[d] = static_cast<int>(free_.size());
      free_.push_back(d);
    }
  }
}

std::array<int, 6> TaylorHoodSpace::cell_dofs(int t) const {
  const auto& tri = mesh_.triangles()[t];
  const auto& ed = mesh_.triangle_edges()[t];
  const int nv = mesh_.num_vertices();
  return {tri[0], tri[1], tri[2], nv + ed[0], nv + ed[1], nv + ed[2]};
}

Point2 TaylorHoodSpace::scalar_dof_point(int s) const {
  const int nv = mesh_.num_vertices();
  return s < nv ? mesh_.vertices()[s] : mesh_.edge_midpoint(s - nv);
}

TaylorHoodSpace build_space(const TriMesh& mesh) { return TaylorHoodSpace(mesh); }

}  // namespace sivs
