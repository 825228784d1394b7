#include "sivs/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sivs {

ErrorReport errors_vs_analytic(const TaylorHoodSpace& space, const Vector& u, const Vector& p,
                               const ExactSolution& exact, const QuadratureRule& quad) {
  const TriMesh& mesh = space.mesh();
  const int ns = space.num_scalar_dofs();
  const auto& verts = mesh.vertices();

  // Means for the zero-mean pressure representatives.
  double mean_h = 0.0, mean_ex = 0.0, area = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double at = mesh.signed_area(t);
    area += at;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::Vector3d& lam = quad.points[q];
      const Point2 x = lam(0) * verts[tri[0]] + lam(1) * verts[tri[1]] + lam(2) * verts[tri[2]];
      mean_h += quad.weights[q] * at * (lam(0) * p(tri[0]) + lam(1) * p(tri[1]) + lam(2) * p(tri[2]));
      mean_ex += quad.weights[q] * at * exact.p(x);
    }
  }
  mean_h /= area;
  mean_ex /= area;

  ErrorReport rep;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto dofs = space.cell_dofs(t);
    const double at = mesh.signed_area(t);
    const auto grad_lam = barycentric_gradients<double>(verts[tri[0]], verts[tri[1]], verts[tri[2]]);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::Vector3d& lam = quad.points[q];
      const Point2 x = lam(0) * verts[tri[0]] + lam(1) * verts[tri[1]] + lam(2) * verts[tri[2]];
      const auto phi = p2_values<double>(lam);
      const auto dphi = p2_gradients<double>(lam, grad_lam);
      Eigen::Vector2d uh = Eigen::Vector2d::Zero();
      Eigen::Matrix2d guh = Eigen::Matrix2d::Zero();
      for (int i = 0; i < 6; ++i) {
        const double ux = u(dofs[i]), uy = u(ns + dofs[i]);
        uh += phi(i) * Eigen::Vector2d(ux, uy);
        guh.row(0) += ux * dphi.row(i);
        guh.row(1) += uy * dphi.row(i);
      }
      const double ph = lam(0) * p(tri[0]) + lam(1) * p(tri[1]) + lam(2) * p(tri[2]) - mean_h;
      const Eigen::Vector2d eu = exact.u(x) - uh;
      const Eigen::Matrix2d eg = exact.grad_u(x) - guh;
      const double w = quad.weights[q] * at;
      rep.l2_u += w * eu.squaredNorm();
      rep.h1_u += w * eg.squaredNorm();
      rep.div_u += w * eg.trace() * eg.trace();
      const double ep = exact.p(x) - mean_ex - ph;
      rep.l2_p += w * ep * ep;
    }
  }
  rep.l2_u = std::sqrt(rep.l2_u);
  rep.h1_u = std::sqrt(rep.h1_u);
  rep.div_u = std::sqrt(rep.div_u);
  rep.l2_p = std::sqrt(rep.l2_p);
  return rep;
}

ErrorReport errors_vs_interpolant(const TaylorHoodSpace& space, const Vector& u, const Vector& p,
                                  const ExactSolution& exact, const QuadratureRule& quad) {
  const auto [iu, ip] = interpolate(space, exact.u, exact.p);
  const ExactSolution zero{[](const Point2&) { return Eigen::Vector2d::Zero().eval(); },
                           [](const Point2&) { return Eigen::Matrix2d::Zero().eval(); },
                           [](const Point2&) { return 0.0; }};
  ErrorReport rep = errors_vs_analytic(space, Vector(iu - u), Vector(ip - p), zero, quad);
  rep.div_u = errors_vs_analytic(space, u, p, exact, quad).div_u;
  return rep;
}

double linv_norm(const ConstrainedSystem& system, const SparseFactorization& a_ff, const Vector& q) {
  if (q.size() != system.b_f.rows()) throw std::invalid_argument("linv_norm: pressure vector size mismatch");
  const Vector r = system.b_f.transpose() * q;
  return std::sqrt(std::max(0.0, r.dot(a_ff.solve(r))));
}

ReferenceErrors errors_vs_reference(const ConstrainedSystem& system, const SparseFactorization& a_ff,
                                    const Vector& u, const Vector& p, const Vector& u_tilde,
                                    const Vector& u_ref, const Vector& p_ref) {
  const DiscreteSystem& sys = *system.system;
  const Eigen::Index nu = sys.k.rows();
  if (u.size() != nu || u_tilde.size() != nu || u_ref.size() != nu || p.size() != p_ref.size())
    throw std::invalid_argument("errors_vs_reference: dimension mismatch");
  const Vector e = u_ref - u;
  const Vector et = u_ref - u_tilde;
  ReferenceErrors out;
  out.a = e.dot(sys.k * e);
  out.b = 0.25 * sys.nu * et.dot(sys.k * et) + 0.5 * sys.gamma * (et.dot(sys.g * et) + e.dot(sys.g * e));
  const double l = linv_norm(system, a_ff, p_ref - p);
  out.c = 0.5 * l * l;
  return out;
}

std::vector<std::optional<double>> rates(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size()) throw std::invalid_argument("rates: h and error lists differ in length");
  std::vector<std::optional<double>> out;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (!(errors[i - 1] > 0.0) || !(errors[i] > 0.0) || !(h[i - 1] > 0.0) || !(h[i] > 0.0) || h[i] == h[i - 1]) {
      out.emplace_back(std::nullopt);
      continue;
    }
    out.emplace_back(std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]));
  }
  return out;
}

ContractionTrace contraction_trace(const SolveResult& run, const Vector& u_ref, const Vector& p_ref,
                                   const ConstrainedSystem& system) {
  if (run.iterates.size() != static_cast<std::size_t>(run.iterations))
    throw std::invalid_argument("contraction_trace: run was made without keep_iterates");
  const SparseFactorization a_ff = cholesky_factorize(system.a_ff);
  const double nu = system.system->nu;
  ContractionTrace tr;
  for (const Iterate& it : run.iterates) {
    const ReferenceErrors r = errors_vs_reference(system, a_ff, it.u, it.p, it.u_tilde, u_ref, p_ref);
    tr.a.push_back(r.a);
    tr.b.push_back(r.b);
    tr.c.push_back(r.c);
    tr.monitor.push_back(0.5 * nu * r.a + r.b + r.c);
  }
  // ratios m_{k+1}/m_k for k >= 2 (1-based); needs three iterations
  const std::size_t n = tr.monitor.size();
  if (n >= 3 && tr.monitor[1] > 0.0 && tr.monitor[n - 1] > 0.0)
    tr.ratio = std::pow(tr.monitor[n - 1] / tr.monitor[1], 1.0 / static_cast<double>(n - 2));
  return tr;
}

CenterlineSample centerline(const TaylorHoodSpace& space, const Vector& u, Centerline which,
                            const std::vector<double>& ordinates, double reynolds) {
  CenterlineSample s;
  s.which = which;
  s.reynolds = reynolds;
  for (double c : ordinates) {
    if (!(c >= 0.0 && c <= 1.0)) throw std::domain_error("centerline: ordinate outside [0, 1]");
    const Point2 x = which == Centerline::Vertical ? Point2(0.5, c) : Point2(c, 0.5);
    const FieldValue fv = evaluate_field(space, u, x);
    s.coordinates.push_back(c);
    s.values.push_back(which == Centerline::Vertical ? fv.value.x() : fv.value.y());
  }
  return s;
}

ReferenceProfile read_reference_profile(const std::string& path, double reynolds) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference profile " + path);
  std::string line;
  int column = -1;
  ReferenceProfile prof;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (column < 0) {
      for (std::size_t i = 1; i < cells.size(); ++i)
        if (cells[i].rfind("Re", 0) == 0 && std::stod(cells[i].substr(2)) == reynolds) column = static_cast<int>(i);
      if (column < 0) throw std::runtime_error(path + ": no column for Re=" + std::to_string(reynolds));
      continue;
    }
    prof.coordinates.push_back(std::stod(cells.at(0)));
    prof.values.push_back(std::stod(cells.at(column)));
  }
  return prof;
}

void write_error_header(std::ostream& os) { os << "l2_u,h1_u,div_u,l2_p"; }

void write_error_row(std::ostream& os, const ErrorReport& e) {
  os << e.l2_u << ',' << e.h1_u << ',' << e.div_u << ',' << e.l2_p;
}

void write_contraction_csv(std::ostream& os, const ContractionTrace& trace) {
  os << "k,a,b,c,monitor\n";
  for (std::size_t i = 0; i < trace.monitor.size(); ++i)
    os << i + 1 << ',' << trace.a[i] << ',' << trace.b[i] << ',' << trace.c[i] << ',' << trace.monitor[i] << '\n';
}

}  // namespace sivs
