#pragma once

#include <Eigen/Core>

#include <vector>

namespace sivs {

/// Triangle quadrature in barycentric coordinates. Weights are normalized to
/// sum to one, so an integral over triangle T is |T| * sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Symmetric 7-point rule, exact for polynomials of degree 5.
QuadratureRule seven_point_rule();

/// Collapsed Gauss-Legendre product rule exact to at least `degree`.
QuadratureRule collapsed_gauss_rule(int degree);

/// Cheapest available rule of at least the requested degree.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace sivs
