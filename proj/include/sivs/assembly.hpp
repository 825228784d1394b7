#pragma once

#include "sivs/quadrature.hpp"
#include "sivs/sparse.hpp"
#include "sivs/taylor_hood.hpp"

#include <Eigen/Core>

#include <memory>
#include <utility>

namespace sivs {

/// Operators of the steady problem. Matrices act on full (unconstrained)
/// velocity vectors in the blocked layout of TaylorHoodSpace.
struct DiscreteSystem {
  std::shared_ptr<const TaylorHoodSpace> space;
  CsrMatrix a_tilde;  // nu * K + gamma * G
  CsrMatrix k;        // vector H1-seminorm Gram
  CsrMatrix g;        // div-div Gram
  CsrMatrix b;        // n_p x n_u, b(q, v) = -(q, div v)
  CsrMatrix mp;       // P1 mass
  Vector f;
  DirichletData dirichlet;
  double nu = 1.0;
  double gamma = 0.0;
};

/// Free/constrained splitting with Dirichlet lifting.
struct ConstrainedSystem {
  std::shared_ptr<const DiscreteSystem> system;
  Vector g;         // values on constrained_dofs()
  Vector g_full;    // n_u vector, zero on free dofs
  CsrMatrix a_ff;   // A_tilde[free, free]
  CsrMatrix a_fc;   // A_tilde[free, constrained]
  CsrMatrix b_f;    // B[:, free]
  Vector f_f;       // F_f - A_fc g
  Vector d_g;       // -B[:, constrained] g

  const TaylorHoodSpace& space() const { return *system->space; }
  /// Full vector from free values and the stored boundary values.
  Vector expand(const Vector& u_free) const;
  Vector restrict_free(const Vector& u_full) const;
};

CsrMatrix assemble_stiffness(const TaylorHoodSpace& space);
CsrMatrix assemble_graddiv(const TaylorHoodSpace& space);
CsrMatrix assemble_operator_a(const TaylorHoodSpace& space, double nu, double gamma);
CsrMatrix assemble_divergence(const TaylorHoodSpace& space);
/// Matrix of c*(w_h, trial, test) for the velocity coefficient vector `w`.
CsrMatrix assemble_convection(const TaylorHoodSpace& space, const Vector& w);
CsrMatrix assemble_pressure_mass(const TaylorHoodSpace& space);
Vector assemble_load(const TaylorHoodSpace& space, const VectorField& f, const QuadratureRule& quad);

DiscreteSystem build_system(std::shared_ptr<const TaylorHoodSpace> space, double nu, double gamma,
                            const VectorField& forcing, DirichletData bc);

/// Throws std::invalid_argument when a constrained dof's tag has no data.
Vector dirichlet_values(const TaylorHoodSpace& space, const DirichletData& bc);

ConstrainedSystem apply_dirichlet(std::shared_ptr<const DiscreteSystem> system, const DirichletData& bc);
ConstrainedSystem apply_dirichlet(std::shared_ptr<const DiscreteSystem> system);

/// Nodal interpolation: P2 values at vertices and midpoints, P1 at vertices.
std::pair<Vector, Vector> interpolate(const TaylorHoodSpace& space, const VectorField& u, const ScalarField& p);

struct FieldValue {
  Eigen::Vector2d value;
  Eigen::Matrix2d gradient;  // gradient(i, j) = d u_i / d x_j
};

FieldValue evaluate_field(const TaylorHoodSpace& space, const Vector& u, const Point2& p);
double evaluate_pressure(const TaylorHoodSpace& space, const Vector& p, const Point2& x);

/// Shift to zero Mp-weighted mean.
void normalize_pressure(const CsrMatrix& mp, Vector& p);

}  // namespace sivs
