#include "doctest.h"
#include "oracles.hpp"

#include "sivs/bench.hpp"
#include "sivs/diagnostics.hpp"
#include "sivs/problems.hpp"

using namespace sivs;

namespace {

ExactSolution quadratic_solution() {
  return {[](const Point2& x) { return Eigen::Vector2d(x.x() * x.y(), x.y() * x.y() - x.x()); },
          [](const Point2& x) {
            Eigen::Matrix2d g;
            g << x.y(), x.x(), -1.0, 2.0 * x.y();
            return g;
          },
          [](const Point2& x) { return x.x() - 2.0 * x.y(); }};
}

}  // namespace

TEST_CASE("errors of an interpolated quadratic vanish") {
  const TaylorHoodSpace s(unit_square_mesh(4));
  const ExactSolution ex = quadratic_solution();
  const auto [u, p] = interpolate(s, ex.u, ex.p);
  const ErrorReport e = errors_vs_analytic(s, u, p, ex, triangle_rule(12));
  CHECK(e.l2_u <= 1e-13);
  CHECK(e.h1_u <= 1e-12);
  CHECK(e.div_u <= 1e-12);
  CHECK(e.l2_p <= 1e-13);
  // pressure compared modulo constants
  const ErrorReport shifted = errors_vs_analytic(s, u, Vector(p.array() + 3.0), ex, triangle_rule(12));
  CHECK(shifted.l2_p <= 1e-13);
  const ErrorReport t = errors_vs_interpolant(s, u, p, ex, triangle_rule(12));
  CHECK(t.l2_u == 0.0);
  CHECK(t.h1_u == 0.0);
}

TEST_CASE("error of the zero field equals the exact norms") {
  const TaylorHoodSpace s(unit_square_mesh(3));
  const ExactSolution ex = mms::exact();
  const ErrorReport e = errors_vs_analytic(s, Vector::Zero(s.num_velocity_dofs()), Vector::Zero(s.num_pressure_dofs()),
                                           ex, triangle_rule(12));
  // ||p||^2 = (int (2x-1)^2)^2 = 1/9 on the unit square
  CHECK(e.l2_p == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(e.div_u <= 1e-14);
  // ||u||^2 = 2 * (4 * int a0^2 * int b0^2): int a0^2 = 1/630, int b0^2 = 1/210
  CHECK(e.l2_u == doctest::Approx(std::sqrt(8.0 / (630.0 * 210.0))).epsilon(1e-12));
}

TEST_CASE("rates") {
  const auto r = rates({0.1, 0.05}, {2.29e-3, 1.54e-4});
  REQUIRE(r.size() == 1);
  REQUIRE(r[0]);
  CHECK(*r[0] == doctest::Approx(3.89).epsilon(0.002));
  CHECK(*rates({0.1, 0.05}, {1e-3, 1e-3})[0] == 0.0);
  const std::vector<double> h = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> e;
  for (double x : h) e.push_back(x * x * x);
  for (const auto& v : rates(h, e)) CHECK(std::abs(*v - 3.0) <= 1e-12);
  const auto bad = rates({0.1, 0.05, 0.025}, {1e-3, 0.0, 1e-5});
  CHECK_FALSE(bad[0]);
  CHECK_FALSE(bad[1]);
  CHECK(rates({0.1}, {1.0}).empty());
  CHECK_THROWS_AS(rates({0.1, 0.2}, {1.0}), std::invalid_argument);
}

TEST_CASE("inverse-operator norm") {
  const auto sys = make_cavity_system(4, 100.0, 1.0);
  const ConstrainedSystem cs = apply_dirichlet(sys);
  const SparseFactorization a = cholesky_factorize(cs.a_ff);
  CHECK(linv_norm(cs, a, Vector::Ones(sys->mp.rows())) <= 1e-13);
  CHECK_THROWS_AS(linv_norm(cs, a, Vector::Zero(2)), std::invalid_argument);

  const Eigen::MatrixXd af = oracle::dense(cs.a_ff);
  const Eigen::MatrixXd bf = oracle::dense(cs.b_f);
  const Eigen::MatrixXd ainv = af.inverse();
  std::mt19937 rng(51);
  for (int i = 0; i < 10; ++i) {
    const Vector q = oracle::random_vector(rng, bf.rows());
    const Vector r = bf.transpose() * q;
    CHECK(linv_norm(cs, a, q) == doctest::Approx(std::sqrt(r.dot(ainv * r))).epsilon(1e-10));
  }
}

TEST_CASE("inverse-operator norm equivalence") {
  for (auto [nu, gamma] : {std::pair{1.0, 1.0}, {0.01, 1.0}, {0.001, 1e3}}) {
    const auto space = std::make_shared<const TaylorHoodSpace>(unit_square_mesh(6));
    const auto sys = std::make_shared<const DiscreteSystem>(
        build_system(space, nu, gamma, nullptr, DirichletData::homogeneous()));
    const ConstrainedSystem cs = apply_dirichlet(sys);
    const SparseFactorization a = cholesky_factorize(cs.a_ff);
    const CsrMatrix kff =
        extract(sys->k, space->free_index(), space->num_free(), space->free_index(), space->num_free());
    const SparseFactorization k = cholesky_factorize(kff);
    std::mt19937 rng(53);
    for (int i = 0; i < 100; ++i) {
      const Vector q = oracle::random_vector(rng, sys->mp.rows());
      const Vector r = cs.b_f.transpose() * q;
      const double kdual = std::sqrt(r.dot(k.solve(r)));
      const double v = linv_norm(cs, a, q);
      CHECK(kdual / std::sqrt(nu + gamma) <= v * (1.0 + 1e-12));
      CHECK(v <= kdual / std::sqrt(nu) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("reference errors") {
  const auto space = std::make_shared<const TaylorHoodSpace>(unit_square_mesh(5));
  const auto sys = std::make_shared<const DiscreteSystem>(
      build_system(space, 0.5, 0.0, mms::forcing_field(0.5), DirichletData::homogeneous()));
  const ConstrainedSystem cs = apply_dirichlet(sys);
  const SparseFactorization a = cholesky_factorize(cs.a_ff);
  std::mt19937 rng(57);
  const Vector us = cs.expand(oracle::random_vector(rng, space->num_free()));
  const Vector ps = oracle::random_vector(rng, sys->mp.rows());
  const Vector ut = cs.expand(oracle::random_vector(rng, space->num_free()));
  const ReferenceErrors same = errors_vs_reference(cs, a, us, ps, ut, us, ps);
  CHECK(same.a == 0.0);
  CHECK(same.c == 0.0);
  const Vector et = us - ut;
  CHECK(same.b == doctest::Approx(0.25 * 0.5 * et.dot(sys->k * et)).epsilon(1e-14));
  const Vector e = cs.expand(oracle::random_vector(rng, space->num_free()));
  CHECK(e.dot(sys->g * e) <= e.dot(sys->k * e));
  CHECK_THROWS_AS(errors_vs_reference(cs, a, us, ps, Vector::Zero(3), us, ps), std::invalid_argument);
}

TEST_CASE("centerlines") {
  const auto sys = make_cavity_system(8, 100.0, 1.0);
  const ConstrainedSystem cs = apply_dirichlet(sys);
  const SolveResult r = sivs_solve(cs, SolveConfig{});
  const CenterlineSample v = centerline(cs.space(), r.u, Centerline::Vertical, {1.0, 0.5, 0.0}, 100.0);
  CHECK(v.values[0] == doctest::Approx(cavity::lid_speed(0.5)).epsilon(1e-14));
  CHECK(std::abs(v.values[2]) <= 1e-15);
  CHECK(v.reynolds == 100.0);
  CHECK(v.coordinates.size() == 3);
  const CenterlineSample h = centerline(cs.space(), r.u, Centerline::Horizontal, {0.0, 1.0});
  CHECK(std::abs(h.values[0]) <= 1e-15);
  CHECK(std::abs(h.values[1]) <= 1e-15);
  CHECK_THROWS_AS(centerline(cs.space(), r.u, Centerline::Vertical, {1.2}), std::domain_error);
}

TEST_CASE("contraction trace requires retained iterates") {
  const ConstrainedSystem cs = apply_dirichlet(make_mms_system(4, 1.0, 1.0));
  const SolveResult r = sivs_solve(cs, SolveConfig{});
  CHECK_THROWS_AS(contraction_trace(r, r.u, r.p, cs), std::invalid_argument);
}

TEST_CASE("vendored reference profiles") {
  const auto u = read_reference_profile((bench::data_dir() / "ghia_u.csv").string(), 100.0);
  REQUIRE(u.coordinates.size() == 17);
  CHECK(u.coordinates.front() == 1.0);
  CHECK(u.values.front() == 1.0);
  CHECK(u.values[8] == -0.20581);
  const auto v = read_reference_profile((bench::data_dir() / "ghia_v.csv").string(), 5000.0);
  CHECK(v.values[1] == -0.49774);
  for (std::size_t i = 0; i < 17; ++i) {
    CHECK(u.coordinates[i] == doctest::Approx(bench::ghia_vertical_ordinates()[i]));
    CHECK(v.coordinates[i] == doctest::Approx(bench::ghia_horizontal_ordinates()[i]));
  }
  CHECK_THROWS(read_reference_profile((bench::data_dir() / "ghia_u.csv").string(), 123.0));
  CHECK_THROWS(read_reference_profile("/nonexistent/ghia.csv", 100.0));
}

TEST_CASE("CSV writers") {
  std::ostringstream os;
  write_error_header(os);
  os << '\n';
  write_error_row(os, ErrorReport{1.0, 2.0, 3.0, 4.0});
  CHECK(os.str() == "l2_u,h1_u,div_u,l2_p\n1,2,3,4");
  ContractionTrace t;
  t.a = {1.0};
  t.b = {2.0};
  t.c = {3.0};
  t.monitor = {4.0};
  std::ostringstream cs;
  write_contraction_csv(cs, t);
  CHECK(cs.str() == "k,a,b,c,monitor\n1,1,2,3,4\n");
}
