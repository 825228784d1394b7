#include "sivs/problems.hpp"

#include <cmath>

namespace sivs {

namespace mms {

namespace {
// a(s) = (s^2 - s)^2, b(s) = (s^2 - s)(2s - 1) = a'(s) / 2
double a0(double s) { return (s * s - s) * (s * s - s); }
double a2(double s) { return 12.0 * s * s - 12.0 * s + 2.0; }
double b0(double s) { return (s * s - s) * (2.0 * s - 1.0); }
double b1(double s) { return 6.0 * s * s - 6.0 * s + 1.0; }
double b2(double s) { return 12.0 * s - 6.0; }
}  // namespace

Eigen::Vector2d velocity(const Point2& p, double amplitude) {
  const double x = p.x(), y = p.y();
  return amplitude * Eigen::Vector2d(2.0 * a0(x) * b0(y), -2.0 * b0(x) * a0(y));
}

Eigen::Matrix2d velocity_gradient(const Point2& p, double amplitude) {
  const double x = p.x(), y = p.y();
  Eigen::Matrix2d g;
  g << 4.0 * b0(x) * b0(y), 2.0 * a0(x) * b1(y),
      -2.0 * b1(x) * a0(y), -4.0 * b0(x) * b0(y);
  return amplitude * g;
}

double pressure(const Point2& p) { return (2.0 * p.x() - 1.0) * (2.0 * p.y() - 1.0); }

Eigen::Vector2d forcing(const Point2& p, double nu, double amplitude) {
  const double x = p.x(), y = p.y();
  const Eigen::Vector2d lap =
      amplitude * Eigen::Vector2d(2.0 * (a2(x) * b0(y) + a0(x) * b2(y)), -2.0 * (b2(x) * a0(y) + b0(x) * a2(y)));
  const Eigen::Vector2d u = velocity(p, amplitude);
  const Eigen::Matrix2d g = velocity_gradient(p, amplitude);
  const Eigen::Vector2d grad_p(2.0 * (2.0 * y - 1.0), 2.0 * (2.0 * x - 1.0));
  return -nu * lap + g * u + grad_p;
}

ExactSolution exact(double amplitude) {
  return {[amplitude](const Point2& p) { return velocity(p, amplitude); },
          [amplitude](const Point2& p) { return velocity_gradient(p, amplitude); }, pressure};
}

VectorField forcing_field(double nu, double amplitude) {
  return [nu, amplitude](const Point2& p) { return forcing(p, nu, amplitude); };
}

}  // namespace mms

namespace cavity {

double lid_speed(double x) {
  const double s = 2.0 * x - 1.0;
  const double s8 = std::pow(s, 8);
  return (1.0 - s8) * (1.0 - s8);
}

DirichletData boundary_data() {
  DirichletData bc = DirichletData::homogeneous();
  bc.by_tag[BoundaryTag::Lid] = [](const Point2& p) { return Eigen::Vector2d(lid_speed(p.x()), 0.0); };
  return bc;
}

}  // namespace cavity

std::shared_ptr<const DiscreteSystem> make_mms_system(int n, double nu, double gamma, double amplitude) {
  auto space = std::make_shared<const TaylorHoodSpace>(unit_square_mesh(n));
  return std::make_shared<const DiscreteSystem>(
      build_system(space, nu, gamma, mms::forcing_field(nu, amplitude), DirichletData::homogeneous()));
}

std::shared_ptr<const DiscreteSystem> make_cavity_system(std::shared_ptr<const TaylorHoodSpace> space, double re,
                                                         double gamma) {
  return std::make_shared<const DiscreteSystem>(
      build_system(std::move(space), cavity::nu_from_reynolds(re), gamma, nullptr, cavity::boundary_data()));
}

std::shared_ptr<const DiscreteSystem> make_cavity_system(int n, double re, double gamma) {
  return make_cavity_system(std::make_shared<const TaylorHoodSpace>(unit_square_mesh(n)), re, gamma);
}

}  // namespace sivs
