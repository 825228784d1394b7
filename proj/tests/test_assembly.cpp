#include "doctest.h"
#include "oracles.hpp"

#include "sivs/assembly.hpp"
#include "sivs/problems.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace sivs;

namespace {

std::shared_ptr<const TaylorHoodSpace> space_of(int n) {
  return std::make_shared<const TaylorHoodSpace>(unit_square_mesh(n));
}

Vector random_free_full(const TaylorHoodSpace& s, std::mt19937& rng) {
  Vector v = Vector::Zero(s.num_velocity_dofs());
  const Vector r = oracle::random_vector(rng, s.num_free());
  for (int i = 0; i < s.num_free(); ++i) v(s.free_dofs()[i]) = r(i);
  return v;
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return oracle::max_abs(a - b) / std::max(oracle::max_abs(b), 1e-300);
}

}  // namespace

TEST_CASE("assembled operators match the dense oracle") {
  for (int n : {1, 2, 3}) {
    CAPTURE(n);
    const auto s = space_of(n);
    std::mt19937 rng(3 + n);
    const Vector w = oracle::random_vector(rng, s->num_velocity_dofs());
    const auto d = oracle::dense_assembly(*s, w, nullptr);
    CHECK(rel_diff(oracle::dense(assemble_stiffness(*s)), d.k) <= 1e-13);
    CHECK(rel_diff(oracle::dense(assemble_graddiv(*s)), d.g) <= 1e-13);
    CHECK(rel_diff(oracle::dense(assemble_divergence(*s)), d.b) <= 1e-13);
    CHECK(rel_diff(oracle::dense(assemble_pressure_mass(*s)), d.mp) <= 1e-13);
    CHECK(rel_diff(oracle::dense(assemble_convection(*s, w)), d.c) <= 1e-13);
  }
}

TEST_CASE("load vector matches a refined oracle rule") {
  const auto s = space_of(4);
  const double nu = 0.7;
  const auto f = mms::forcing_field(nu);
  const Vector load = assemble_load(*s, f, triangle_rule(8));
  const auto d = oracle::dense_assembly(*s, Vector::Zero(s->num_velocity_dofs()),
                                        [&](const Eigen::Vector2d& x) { return f(x); }, 7);
  // the integrand has degree 15, so neither rule is exact
  CHECK((load - d.f).cwiseAbs().maxCoeff() <= 1e-9 * d.f.cwiseAbs().maxCoeff());
  // an interior dof
  const int dof = s->free_dofs()[s->num_free() / 3];
  CHECK(load(dof) == doctest::Approx(d.f(dof)).epsilon(1e-10));
}

TEST_CASE("load of trivial fields") {
  const auto s = space_of(5);
  const Vector zero = assemble_load(*s, [](const Point2&) { return Eigen::Vector2d::Zero().eval(); }, triangle_rule(8));
  CHECK(zero.norm() == 0.0);
  const Vector ex = assemble_load(*s, [](const Point2&) { return Eigen::Vector2d(1.0, 0.0); }, triangle_rule(8));
  const int ns = s->num_scalar_dofs();
  CHECK(ex.head(ns).sum() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(ex.tail(ns).sum()) <= 1e-15);
}

TEST_CASE("operator a combines stiffness and grad-div") {
  const auto s = space_of(6);
  const CsrMatrix k = assemble_stiffness(*s), g = assemble_graddiv(*s);
  for (auto [nu, gamma] : {std::pair{1.0, 1.0}, {0.01, 1e3}, {2.5, 0.0}}) {
    const Eigen::MatrixXd a = oracle::dense(assemble_operator_a(*s, nu, gamma));
    const Eigen::MatrixXd ref = nu * oracle::dense(k) + gamma * oracle::dense(g);
    CHECK(oracle::max_abs(a - ref) <= 1e-14 * oracle::max_abs(ref));
    CHECK(oracle::max_abs(a - a.transpose()) <= 1e-14 * oracle::max_abs(a));
  }
  std::mt19937 rng(5);
  const Vector v = random_free_full(*s, rng);
  const CsrMatrix a0 = assemble_operator_a(*s, 0.3, 0.0);
  CHECK(v.dot(a0 * v) == doctest::Approx(0.3 * v.dot(k * v)).epsilon(1e-14));
  CHECK_THROWS_AS(assemble_operator_a(*s, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(assemble_operator_a(*s, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("norm equivalence on random free vectors") {
  const auto s = space_of(8);
  const CsrMatrix k = assemble_stiffness(*s), g = assemble_graddiv(*s);
  std::mt19937 rng(17);
  for (auto [nu, gamma] : {std::pair{1.0, 1.0}, {0.01, 1.0}, {1e-3, 1e6}}) {
    const CsrMatrix a = assemble_operator_a(*s, nu, gamma);
    for (int i = 0; i < 100; ++i) {
      const Vector v = random_free_full(*s, rng);
      const double kv = v.dot(k * v), av = v.dot(a * v), gv = v.dot(g * v);
      CHECK(gv <= kv * (1.0 + 1e-13));
      CHECK(std::sqrt(nu * kv) <= std::sqrt(av) * (1.0 + 1e-13));
      CHECK(std::sqrt(av) <= std::sqrt((nu + gamma) * kv) * (1.0 + 1e-13));
    }
  }
}

TEST_CASE("reduced operator and pressure mass are SPD") {
  const auto s = space_of(4);
  const auto sys = std::make_shared<const DiscreteSystem>(build_system(s, 0.5, 2.0, nullptr, DirichletData::homogeneous()));
  const ConstrainedSystem cs = apply_dirichlet(sys);
  CHECK_NOTHROW(cholesky_factorize(cs.a_ff));
  const Eigen::MatrixXd a = oracle::dense(cs.a_ff);
  CHECK(oracle::max_abs(a - a.transpose()) <= 1e-15 * oracle::max_abs(a));
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff() > 0.0);
  const Eigen::MatrixXd mp = oracle::dense(sys->mp);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mp).eigenvalues().minCoeff() > 0.0);
  CHECK_NOTHROW(cholesky_factorize(sys->mp));
}

TEST_CASE("pressure mass") {
  for (int n : {1, 4, 9}) {
    const CsrMatrix mp = assemble_pressure_mass(*space_of(n));
    const Vector one = Vector::Ones(mp.rows());
    CHECK(one.dot(mp * one) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // q = I_h x is exact in P1, so q'Mp q = 1/3; I_h x^2 converges to 1/5 at O(h^2)
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const auto s = space_of(n);
    const CsrMatrix mp = assemble_pressure_mass(*s);
    const auto zero_u = [](const Point2&) { return Eigen::Vector2d::Zero().eval(); };
    const Vector q1 = interpolate(*s, zero_u, [](const Point2& x) { return x.x(); }).second;
    CHECK(q1.dot(mp * q1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const Vector q2 = interpolate(*s, zero_u, [](const Point2& x) { return x.x() * x.x(); }).second;
    const double err = std::abs(q2.dot(mp * q2) - 0.2);
    CHECK(err <= 1.0 / (n * n));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("divergence operator") {
  const auto s = space_of(6);
  const CsrMatrix b = assemble_divergence(*s);
  CHECK(b.rows() == s->num_pressure_dofs());
  CHECK(b.cols() == s->num_velocity_dofs());
  std::mt19937 rng(23);
  const Vector ones = Vector::Ones(b.rows());
  for (int i = 0; i < 10; ++i) {
    const Vector v = random_free_full(*s, rng);
    CHECK(std::abs(ones.dot(b * v)) <= 1e-13 * v.norm());
  }
  const auto zero_p = [](const Point2&) { return 0.0; };
  const auto [v1, p1] = interpolate(*s, [](const Point2& x) { return Eigen::Vector2d(x.x(), -x.y()); }, zero_p);
  CHECK((b * v1).cwiseAbs().maxCoeff() <= 1e-13);
  const auto [v2, p2] = interpolate(*s, [](const Point2& x) { return Eigen::Vector2d(x.x(), x.y()); }, zero_p);
  const Vector integrals = assemble_pressure_mass(*s) * ones;  // int of each P1 basis function
  CHECK((b * v2 + 2.0 * integrals).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("convection") {
  const auto s = space_of(6);
  const CsrMatrix c0 = assemble_convection(*s, Vector::Zero(s->num_velocity_dofs()));
  CHECK(oracle::max_abs(oracle::dense(c0)) == 0.0);
  CHECK_THROWS_AS(assemble_convection(*s, Vector::Zero(5)), std::invalid_argument);

  std::mt19937 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector w = oracle::random_vector(rng, s->num_velocity_dofs());  // boundary values too
    const CsrMatrix c = assemble_convection(*s, w);
    const double cnorm = oracle::dense(c).norm();
    const Vector v = random_free_full(*s, rng);
    CHECK(std::abs(v.dot(c * v)) <= 1e-12 * cnorm * v.squaredNorm());
  }
  // skew part on free dofs vanishes entrywise
  const Vector w = oracle::random_vector(rng, s->num_velocity_dofs());
  const CsrMatrix cff = extract(assemble_convection(*s, w), s->free_index(), s->num_free(), s->free_index(), s->num_free());
  const Eigen::MatrixXd d = oracle::dense(cff);
  CHECK(oracle::max_abs(d + d.transpose()) <= 1e-12 * oracle::max_abs(d));
}

TEST_CASE("Dirichlet splitting") {
  const auto s = space_of(4);
  const auto hom = std::make_shared<const DiscreteSystem>(
      build_system(s, 1.0, 1.0, mms::forcing_field(1.0), DirichletData::homogeneous()));
  const ConstrainedSystem ch = apply_dirichlet(hom);
  CHECK(ch.g.norm() == 0.0);
  CHECK(ch.d_g.norm() == 0.0);
  CHECK((ch.f_f - ch.restrict_free(hom->f)).norm() == 0.0);

  const auto cav = make_cavity_system(s, 100.0, 1.0);
  const ConstrainedSystem cc = apply_dirichlet(cav);
  std::mt19937 rng(31);
  const Vector full = cc.expand(oracle::random_vector(rng, s->num_free()));
  const int ns = s->num_scalar_dofs();
  for (int i = 0; i < s->num_constrained(); ++i) {
    const int d = s->constrained_dofs()[i];
    const Point2 x = s->scalar_dof_point(d % ns);
    const double expect = (d < ns && x.y() == 1.0) ? cavity::lid_speed(x.x()) : 0.0;
    CHECK(full(d) == expect);
  }
  const Vector gf = cc.g_full;
  CHECK((cc.d_g + cav->b * gf).norm() <= 1e-15);

  DirichletData partial;
  partial.by_tag[BoundaryTag::Wall] = [](const Point2&) { return Eigen::Vector2d::Zero().eval(); };
  CHECK_THROWS_AS(apply_dirichlet(cav, partial), std::invalid_argument);
  CHECK_THROWS_AS(cc.expand(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("interpolation and evaluation") {
  const auto s = space_of(5);
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto lin = [](const Point2& x) { return Eigen::Vector2d(1.0 + 2.0 * x.x() - x.y(), 0.5 * x.y()); };
  const auto quad = [](const Point2& x) {
    return Eigen::Vector2d(x.x() * x.x() - 3.0 * x.x() * x.y() + 0.25, x.y() * x.y() + x.x());
  };
  const auto quad_grad = [](const Point2& x) {
    Eigen::Matrix2d g;
    g << 2.0 * x.x() - 3.0 * x.y(), -3.0 * x.x(), 1.0, 2.0 * x.y();
    return g;
  };
  const auto p_lin = [](const Point2& x) { return 3.0 * x.x() - x.y() + 1.0; };
  const auto [ul, pl] = interpolate(*s, lin, p_lin);
  const auto [uq, pq] = interpolate(*s, quad, p_lin);
  const auto [uc, pc] = interpolate(*s, [](const Point2&) { return Eigen::Vector2d(1.0, 0.0); }, p_lin);
  for (int i = 0; i < 200; ++i) {
    const Point2 x(u(rng), u(rng));
    CHECK((evaluate_field(*s, ul, x).value - lin(x)).norm() <= 1e-14);
    const FieldValue fq = evaluate_field(*s, uq, x);
    CHECK((fq.value - quad(x)).norm() <= 1e-13);
    CHECK((fq.gradient - quad_grad(x)).norm() <= 1e-12);
    CHECK((evaluate_field(*s, uc, x).value - Eigen::Vector2d(1.0, 0.0)).norm() <= 1e-14);
    CHECK(evaluate_pressure(*s, pl, x) == doctest::Approx(p_lin(x)).epsilon(1e-14));
  }
  CHECK(mms::velocity(Point2(0.5, 0.5)).norm() == 0.0);
  CHECK_THROWS_AS(evaluate_field(*s, ul, Point2(1.5, 0.5)), std::domain_error);
  CHECK_THROWS_AS(evaluate_field(*s, Vector::Zero(4), Point2(0.5, 0.5)), std::invalid_argument);
}

TEST_CASE("pressure normalization") {
  const auto s = space_of(4);
  const CsrMatrix mp = assemble_pressure_mass(*s);
  std::mt19937 rng(41);
  Vector p = oracle::random_vector(rng, mp.rows());
  normalize_pressure(mp, p);
  CHECK(std::abs(Vector::Ones(mp.rows()).dot(mp * p)) <= 1e-15);
}
