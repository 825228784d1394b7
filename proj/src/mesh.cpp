#include "sivs/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sivs {

namespace {

constexpr double kDomainTol = 1e-12;

Eigen::Vector3d barycentric(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  const double l1 = ((b.x() - p.x()) * (c.y() - p.y()) - (c.x() - p.x()) * (b.y() - p.y())) / det;
  const double l2 = ((c.x() - p.x()) * (a.y() - p.y()) - (a.x() - p.x()) * (c.y() - p.y())) / det;
  return {l1, l2, 1.0 - l1 - l2};
}

}  // namespace

const char* to_string(BoundaryTag tag) {
  return tag == BoundaryTag::Lid ? "LID" : "WALL";
}

TriMesh::TriMesh(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1, got " + std::to_string(n));

  const int np = n + 1;
  vertices_.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices_.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * np + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + np;
      const int v11 = v01 + 1;
      triangles_.push_back({v00, v10, v11});
      triangles_.push_back({v00, v11, v01});
    }
  }

  std::unordered_map<long long, int> edge_index;
  edge_index.reserve(3 * triangles_.size());
  triangle_edges_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = triangles_[t][k];
      int b = triangles_[t][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      const long long key = static_cast<long long>(a) * num_vertices() + b;
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) edges_.push_back({a, b});
      triangle_edges_[t][k] = it->second;
    }
  }

  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Point2& a = vertices_[edges_[e][0]];
    const Point2& b = vertices_[edges_[e][1]];
    auto on = [](double s, double t, double v) { return s == v && t == v; };
    if (on(a.y(), b.y(), 1.0)) {
      boundary_edges_.push_back({edges_[e], static_cast<int>(e), BoundaryTag::Lid});
    } else if (on(a.y(), b.y(), 0.0) || on(a.x(), b.x(), 0.0) || on(a.x(), b.x(), 1.0)) {
      boundary_edges_.push_back({edges_[e], static_cast<int>(e), BoundaryTag::Wall});
    }
  }
}

double TriMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point2& a = vertices_[tri[0]];
  const Point2& b = vertices_[tri[1]];
  const Point2& c = vertices_[tri[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Point2 TriMesh::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e][0]] + vertices_[edges_[e][1]]);
}

PointLocation TriMesh::locate(const Point2& p) const {
  if (!p.allFinite() || p.x() < -kDomainTol || p.x() > 1.0 + kDomainTol || p.y() < -kDomainTol ||
      p.y() > 1.0 + kDomainTol) {
    throw std::domain_error("locate_point: (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                            ") lies outside the unit square");
  }
  const Point2 q = p.cwiseMax(0.0).cwiseMin(1.0);

  auto cell_range = [this](double s) {
    const int lo = std::clamp(static_cast<int>(std::floor((s - kDomainTol) * n_)), 0, n_ - 1);
    const int hi = std::clamp(static_cast<int>(std::floor((s + kDomainTol) * n_)), 0, n_ - 1);
    return std::pair{lo, hi};
  };
  const auto [i0, i1] = cell_range(q.x());
  const auto [j0, j1] = cell_range(q.y());

  std::vector<int> candidates;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const int c = j * n_ + i;
      candidates.push_back(2 * c);
      candidates.push_back(2 * c + 1);
    }
  std::sort(candidates.begin(), candidates.end());

  for (int t : candidates) {
    const auto& tri = triangles_[t];
    Eigen::Vector3d lam = barycentric(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]], q);
    if (lam.minCoeff() >= -kDomainTol) {
      if (lam.minCoeff() < 0.0) {
        lam = lam.cwiseMax(0.0);
        lam /= lam.sum();
      }
      return {t, lam};
    }
  }
  throw std::domain_error("locate_point: no containing triangle found");
}

void TriMesh::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "# vertices: index,x,y\n";
  for (int v = 0; v < num_vertices(); ++v) os << v << ',' << vertices_[v].x() << ',' << vertices_[v].y() << '\n';
  os << "# triangles: index,v0,v1,v2\n";
  for (int t = 0; t < num_triangles(); ++t)
    os << t << ',' << triangles_[t][0] << ',' << triangles_[t][1] << ',' << triangles_[t][2] << '\n';
  os << "# boundary_edges: v0,v1,tag\n";
  for (const auto& be : boundary_edges_)
    os << be.vertices[0] << ',' << be.vertices[1] << ',' << to_string(be.tag) << '\n';
}

TriMesh unit_square_mesh(int n) { return TriMesh(n); }

double mesh_size(const TriMesh& mesh) {
  double h = 0.0;
  for (const auto& tri : mesh.triangles())
    for (int k = 0; k < 3; ++k)
      h = std::max(h, (mesh.vertices()[tri[k]] - mesh.vertices()[tri[(k + 1) % 3]]).norm());
  return h;
}

PointLocation locate_point(const TriMesh& mesh, const Point2& p) { return mesh.locate(p); }

}  // namespace sivs
