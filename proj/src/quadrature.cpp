#include "sivs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sivs {

QuadratureRule seven_point_rule() {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0;
  const double b1 = (9.0 + 2.0 * s15) / 21.0;
  const double w1 = (155.0 - s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0;
  const double b2 = (9.0 - 2.0 * s15) / 21.0;
  const double w2 = (155.0 + s15) / 1200.0;

  QuadratureRule rule;
  rule.degree = 5;
  rule.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                 {b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                 {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
  rule.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
  return rule;
}

void gauss_legendre_unit(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 1) throw std::invalid_argument("gauss_legendre_unit: m must be positive");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_m.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pm = m == 1 ? x : p1;
      const double pm1 = m == 1 ? 1.0 : p0;
      dp = m * (x * pm - pm1) / (x * x - 1.0);
      const double dx = pm / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double pm = m == 1 ? x : p1;
    const double pm1 = m == 1 ? 1.0 : p0;
    dp = m * (x * pm - pm1) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) scaled by 1/2
  }
}

QuadratureRule collapsed_gauss_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("collapsed_gauss_rule: negative degree");
  // The Duffy Jacobian adds one degree in the collapsed direction.
  const int m = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre_unit(m, x, w);

  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double s = x[i];
      const double t = x[j] * (1.0 - s);
      rule.points.emplace_back(1.0 - s - t, s, t);
      rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - s));
    }
  }
  return rule;
}

QuadratureRule triangle_rule(int degree) {
  if (degree <= 5) return seven_point_rule();
  return collapsed_gauss_rule(degree);
}

}  // namespace sivs
