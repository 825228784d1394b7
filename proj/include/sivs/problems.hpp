#pragma once

#include "sivs/assembly.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace sivs {

struct ExactSolution {
  VectorField u;
  std::function<Eigen::Matrix2d(const Point2&)> grad_u;  // (i, j) = d u_i / d x_j
  ScalarField p;
};

namespace mms {

// Manufactured solution
//   u = A * (2 (x^2-x)^2 (y^2-y)(2y-1), -2 (y^2-y)^2 (x^2-x)(2x-1)),
//   p = (2x-1)(2y-1),
// with A = 1 by default. u is a curl, hence exactly divergence-free, and it
// vanishes on the boundary.
Eigen::Vector2d velocity(const Point2& x, double amplitude = 1.0);
Eigen::Matrix2d velocity_gradient(const Point2& x, double amplitude = 1.0);
double pressure(const Point2& x);
/// -nu Lap u + (u . grad) u + grad p in closed form.
Eigen::Vector2d forcing(const Point2& x, double nu, double amplitude = 1.0);

ExactSolution exact(double amplitude = 1.0);
VectorField forcing_field(double nu, double amplitude = 1.0);

}  // namespace mms

namespace cavity {

/// Regularized lid profile [1 - (2x - 1)^8]^2.
double lid_speed(double x);
DirichletData boundary_data();
inline double nu_from_reynolds(double re) { return 1.0 / re; }

}  // namespace cavity

std::shared_ptr<const DiscreteSystem> make_mms_system(int n, double nu, double gamma, double amplitude = 1.0);
std::shared_ptr<const DiscreteSystem> make_cavity_system(int n, double re, double gamma);
std::shared_ptr<const DiscreteSystem> make_cavity_system(std::shared_ptr<const TaylorHoodSpace> space, double re,
                                                         double gamma);

}  // namespace sivs
