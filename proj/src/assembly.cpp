#include "sivs/assembly.hpp"

#include <stdexcept>
#include <string>

namespace sivs {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Mat62 = Eigen::Matrix<double, 6, 2>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

struct Element {
  std::array<int, 6> dofs;
  std::array<int, 3> vertices;
  Eigen::Matrix<double, 3, 2> grad_lam;
  double area;
};

Element element(const TaylorHoodSpace& space, int t) {
  const TriMesh& mesh = space.mesh();
  const auto& tri = mesh.triangles()[t];
  const auto& v = mesh.vertices();
  return {space.cell_dofs(t), tri, barycentric_gradients<double>(v[tri[0]], v[tri[1]], v[tri[2]]),
          mesh.signed_area(t)};
}

Point2 physical_point(const TriMesh& mesh, const std::array<int, 3>& tri, const Eigen::Vector3d& lam) {
  const auto& v = mesh.vertices();
  return lam(0) * v[tri[0]] + lam(1) * v[tri[1]] + lam(2) * v[tri[2]];
}

CsrMatrix from_triplets(int rows, int cols, const Triplets& trips) {
  CsrMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

/// Element loop for the symmetric velocity operator nu*K + gamma*G.
CsrMatrix assemble_velocity_operator(const TaylorHoodSpace& space, double nu, double gamma) {
  const QuadratureRule quad = seven_point_rule();
  const int ns = space.num_scalar_dofs();
  Triplets trips;
  trips.reserve(static_cast<std::size_t>(space.mesh().num_triangles()) * 144);
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Element el = element(space, t);
    Eigen::Matrix<double, 12, 12> local = Eigen::Matrix<double, 12, 12>::Zero();
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Mat62 dphi = p2_gradients<double>(quad.points[q], el.grad_lam);
      const double w = quad.weights[q] * el.area;
      const Eigen::Matrix<double, 6, 6> lap = dphi * dphi.transpose();
      local.topLeftCorner<6, 6>() += w * nu * lap;
      local.bottomRightCorner<6, 6>() += w * nu * lap;
      // div phi for the stacked (x-block, y-block) basis
      Eigen::Matrix<double, 12, 1> div;
      div << dphi.col(0), dphi.col(1);
      local += w * gamma * div * div.transpose();
    }
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b)
        if (local(a, b) != 0.0)
          trips.emplace_back(space.velocity_dof(a / 6, el.dofs[a % 6]), space.velocity_dof(b / 6, el.dofs[b % 6]),
                             local(a, b));
  }
  return from_triplets(2 * ns, 2 * ns, trips);
}

}  // namespace

CsrMatrix assemble_stiffness(const TaylorHoodSpace& space) { return assemble_velocity_operator(space, 1.0, 0.0); }

CsrMatrix assemble_graddiv(const TaylorHoodSpace& space) {
  CsrMatrix g = assemble_velocity_operator(space, 0.0, 1.0);
  g.prune(0.0);
  return g;
}

CsrMatrix assemble_operator_a(const TaylorHoodSpace& space, double nu, double gamma) {
  if (!(nu > 0.0)) throw std::invalid_argument("assemble_operator_a: nu must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("assemble_operator_a: gamma must be non-negative");
  return assemble_velocity_operator(space, nu, gamma);
}

CsrMatrix assemble_divergence(const TaylorHoodSpace& space) {
  const QuadratureRule quad = seven_point_rule();
  Triplets trips;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Element el = element(space, t);
    Eigen::Matrix<double, 3, 12> local = Eigen::Matrix<double, 3, 12>::Zero();
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::Vector3d& lam = quad.points[q];
      const Mat62 dphi = p2_gradients<double>(lam, el.grad_lam);
      const double w = quad.weights[q] * el.area;
      local.leftCols<6>() -= w * lam * dphi.col(0).transpose();
      local.rightCols<6>() -= w * lam * dphi.col(1).transpose();
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 12; ++b)
        trips.emplace_back(el.vertices[a], space.velocity_dof(b / 6, el.dofs[b % 6]), local(a, b));
  }
  return from_triplets(space.num_pressure_dofs(), space.num_velocity_dofs(), trips);
}

CsrMatrix assemble_convection(const TaylorHoodSpace& space, const Vector& w) {
  if (w.size() != space.num_velocity_dofs())
    throw std::invalid_argument("assemble_convection: advecting vector has length " + std::to_string(w.size()) +
                                ", expected " + std::to_string(space.num_velocity_dofs()));
  const QuadratureRule quad = seven_point_rule();
  const int ns = space.num_scalar_dofs();
  Triplets trips;
  trips.reserve(static_cast<std::size_t>(space.mesh().num_triangles()) * 72);
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Element el = element(space, t);
    Mat62 wloc;
    for (int i = 0; i < 6; ++i) {
      wloc(i, 0) = w(el.dofs[i]);
      wloc(i, 1) = w(ns + el.dofs[i]);
    }
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec6 phi = p2_values<double>(quad.points[q]);
      const Mat62 dphi = p2_gradients<double>(quad.points[q], el.grad_lam);
      const Eigen::Vector2d wq = wloc.transpose() * phi;
      const double divw = wloc.col(0).dot(dphi.col(0)) + wloc.col(1).dot(dphi.col(1));
      const Vec6 adv = dphi * wq;  // w . grad phi_j
      const double wt = quad.weights[q] * el.area;
      // row i = test, column j = trial
      local += wt * (phi * adv.transpose() + 0.5 * divw * phi * phi.transpose());
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        trips.emplace_back(el.dofs[a], el.dofs[b], local(a, b));
        trips.emplace_back(ns + el.dofs[a], ns + el.dofs[b], local(a, b));
      }
  }
  return from_triplets(2 * ns, 2 * ns, trips);
}

CsrMatrix assemble_pressure_mass(const TaylorHoodSpace& space) {
  const QuadratureRule quad = seven_point_rule();
  Triplets trips;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Element el = element(space, t);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < quad.size(); ++q)
      local += quad.weights[q] * el.area * quad.points[q] * quad.points[q].transpose();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trips.emplace_back(el.vertices[a], el.vertices[b], local(a, b));
  }
  return from_triplets(space.num_pressure_dofs(), space.num_pressure_dofs(), trips);
}

Vector assemble_load(const TaylorHoodSpace& space, const VectorField& f, const QuadratureRule& quad) {
  const int ns = space.num_scalar_dofs();
  Vector out = Vector::Zero(2 * ns);
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const Element el = element(space, t);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Vec6 phi = p2_values<double>(quad.points[q]);
      const Eigen::Vector2d fq = f(physical_point(space.mesh(), el.vertices, quad.points[q]));
      const double w = quad.weights[q] * el.area;
      for (int i = 0; i < 6; ++i) {
        out(el.dofs[i]) += w * fq.x() * phi(i);
        out(ns + el.dofs[i]) += w * fq.y() * phi(i);
      }
    }
  }
  return out;
}

DiscreteSystem build_system(std::shared_ptr<const TaylorHoodSpace> space, double nu, double gamma,
                            const VectorField& forcing, DirichletData bc) {
  DiscreteSystem sys;
  sys.nu = nu;
  sys.gamma = gamma;
  sys.a_tilde = assemble_operator_a(*space, nu, gamma);
  sys.k = assemble_stiffness(*space);
  sys.g = assemble_graddiv(*space);
  sys.b = assemble_divergence(*space);
  sys.mp = assemble_pressure_mass(*space);
  sys.f = forcing ? assemble_load(*space, forcing, triangle_rule(8)) : Vector::Zero(space->num_velocity_dofs());
  sys.dirichlet = std::move(bc);
  sys.space = std::move(space);
  return sys;
}

Vector dirichlet_values(const TaylorHoodSpace& space, const DirichletData& bc) {
  const auto& dofs = space.constrained_dofs();
  const auto& tags = space.constrained_tags();
  const int ns = space.num_scalar_dofs();
  Vector g(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    auto it = bc.by_tag.find(tags[i]);
    if (it == bc.by_tag.end() || !it->second)
      throw std::invalid_argument(std::string("apply_dirichlet: no boundary data for tag ") + to_string(tags[i]));
    const int comp = dofs[i] / ns;
    g(static_cast<Eigen::Index>(i)) = it->second(space.scalar_dof_point(dofs[i] % ns))(comp);
  }
  if (!g.allFinite()) throw std::invalid_argument("apply_dirichlet: non-finite boundary values");
  return g;
}

ConstrainedSystem apply_dirichlet(std::shared_ptr<const DiscreteSystem> system, const DirichletData& bc) {
  const TaylorHoodSpace& space = *system->space;
  ConstrainedSystem cs;
  cs.g = dirichlet_values(space, bc);
  cs.g_full = Vector::Zero(space.num_velocity_dofs());
  for (int i = 0; i < space.num_constrained(); ++i) cs.g_full(space.constrained_dofs()[i]) = cs.g(i);

  std::vector<int> identity(space.num_pressure_dofs());
  for (int i = 0; i < space.num_pressure_dofs(); ++i) identity[i] = i;

  cs.a_ff = extract(system->a_tilde, space.free_index(), space.num_free(), space.free_index(), space.num_free());
  cs.a_fc = extract(system->a_tilde, space.free_index(), space.num_free(), space.constrained_index(),
                    space.num_constrained());
  cs.b_f = extract(system->b, identity, space.num_pressure_dofs(), space.free_index(), space.num_free());
  const CsrMatrix b_c =
      extract(system->b, identity, space.num_pressure_dofs(), space.constrained_index(), space.num_constrained());

  Vector f_f(space.num_free());
  for (int i = 0; i < space.num_free(); ++i) f_f(i) = system->f(space.free_dofs()[i]);
  cs.f_f = f_f - cs.a_fc * cs.g;
  cs.d_g = -(b_c * cs.g);
  cs.system = std::move(system);
  return cs;
}

ConstrainedSystem apply_dirichlet(std::shared_ptr<const DiscreteSystem> system) {
  const DirichletData bc = system->dirichlet;
  return apply_dirichlet(std::move(system), bc);
}

Vector ConstrainedSystem::expand(const Vector& u_free) const {
  const TaylorHoodSpace& sp = space();
  if (u_free.size() != sp.num_free()) throw std::invalid_argument("expand: free vector size mismatch");
  Vector full = g_full;
  for (int i = 0; i < sp.num_free(); ++i) full(sp.free_dofs()[i]) = u_free(i);
  return full;
}

Vector ConstrainedSystem::restrict_free(const Vector& u_full) const {
  const TaylorHoodSpace& sp = space();
  if (u_full.size() != sp.num_velocity_dofs()) throw std::invalid_argument("restrict_free: size mismatch");
  Vector out(sp.num_free());
  for (int i = 0; i < sp.num_free(); ++i) out(i) = u_full(sp.free_dofs()[i]);
  return out;
}

std::pair<Vector, Vector> interpolate(const TaylorHoodSpace& space, const VectorField& u, const ScalarField& p) {
  const int ns = space.num_scalar_dofs();
  Vector uu(2 * ns);
  for (int s = 0; s < ns; ++s) {
    const Eigen::Vector2d val = u(space.scalar_dof_point(s));
    uu(s) = val.x();
    uu(ns + s) = val.y();
  }
  Vector pp(space.num_pressure_dofs());
  for (int v = 0; v < space.num_pressure_dofs(); ++v) pp(v) = p(space.mesh().vertices()[v]);
  return {std::move(uu), std::move(pp)};
}

FieldValue evaluate_field(const TaylorHoodSpace& space, const Vector& u, const Point2& x) {
  if (u.size() != space.num_velocity_dofs()) throw std::invalid_argument("evaluate_field: size mismatch");
  const PointLocation loc = locate_point(space.mesh(), x);
  const Element el = element(space, loc.triangle);
  const Vec6 phi = p2_values<double>(loc.barycentric);
  const Mat62 dphi = p2_gradients<double>(loc.barycentric, el.grad_lam);
  const int ns = space.num_scalar_dofs();
  FieldValue out{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero()};
  for (int i = 0; i < 6; ++i) {
    const double ux = u(el.dofs[i]);
    const double uy = u(ns + el.dofs[i]);
    out.value += phi(i) * Eigen::Vector2d(ux, uy);
    out.gradient.row(0) += ux * dphi.row(i);
    out.gradient.row(1) += uy * dphi.row(i);
  }
  return out;
}

double evaluate_pressure(const TaylorHoodSpace& space, const Vector& p, const Point2& x) {
  const PointLocation loc = locate_point(space.mesh(), x);
  const auto& tri = space.mesh().triangles()[loc.triangle];
  return loc.barycentric(0) * p(tri[0]) + loc.barycentric(1) * p(tri[1]) + loc.barycentric(2) * p(tri[2]);
}

void normalize_pressure(const CsrMatrix& mp, Vector& p) {
  const Vector ones = Vector::Ones(p.size());
  const Vector mass_ones = mp * ones;
  p.array() -= mass_ones.dot(p) / mass_ones.sum();
}

}  // namespace sivs
