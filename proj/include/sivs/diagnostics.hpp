#pragma once

#include "sivs/assembly.hpp"
#include "sivs/problems.hpp"
#include "sivs/solvers.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sivs {

struct ErrorReport {
  double l2_u = 0.0;   // ||u - u_h||
  double h1_u = 0.0;   // ||grad(u - u_h)||
  double div_u = 0.0;  // ||div(u - u_h)||
  double l2_p = 0.0;   // ||p - p_h||, both zero-mean
};

/// Element-wise quadrature of the error against an analytic solution.
ErrorReport errors_vs_analytic(const TaylorHoodSpace& space, const Vector& u, const Vector& p,
                               const ExactSolution& exact, const QuadratureRule& quad);

/// Errors in the convention of the published rate tables: velocity L2/H1
/// and pressure L2 measured against the nodal interpolant (I_h u - u_h,
/// I_h p - p_h, zero-mean), divergence as ||div u_h|| = ||div(u - u_h)||.
/// On uniform meshes these exhibit supercloseness (orders 4/3 for velocity).
ErrorReport errors_vs_interpolant(const TaylorHoodSpace& space, const Vector& u, const Vector& p,
                                  const ExactSolution& exact, const QuadratureRule& quad);

/// Energy-type quantities relative to a discrete reference (u*, p*):
/// a = ||grad e||^2, b = nu/4 ||grad e~||^2 + gamma/2 (||div e~||^2 + ||div e||^2),
/// c = 1/2 ||grad delta||^2_{L^-1}.
struct ReferenceErrors {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Discrete ||grad q||_{L^-1} = sqrt(r' A_ff^{-1} r), r = B_f' q.
double linv_norm(const ConstrainedSystem& system, const SparseFactorization& a_ff, const Vector& q);

ReferenceErrors errors_vs_reference(const ConstrainedSystem& system, const SparseFactorization& a_ff,
                                    const Vector& u, const Vector& p, const Vector& u_tilde,
                                    const Vector& u_ref, const Vector& p_ref);

/// Convergence orders between consecutive rows; nullopt marks an undefined rate.
std::vector<std::optional<double>> rates(const std::vector<double>& h, const std::vector<double>& errors);

struct ContractionTrace {
  std::vector<double> a, b, c, monitor;  // monitor = nu/2 a + b + c
  std::optional<double> ratio;           // geometric mean of m_{k+1}/m_k, k >= 2
};

ContractionTrace contraction_trace(const SolveResult& run, const Vector& u_ref, const Vector& p_ref,
                                   const ConstrainedSystem& system);

enum class Centerline { Vertical, Horizontal };

/// Vertical: u_1 along x = 0.5 at the given y; Horizontal: u_2 along y = 0.5.
struct CenterlineSample {
  Centerline which = Centerline::Vertical;
  std::vector<double> coordinates;
  std::vector<double> values;
  double reynolds = 0.0;
};

CenterlineSample centerline(const TaylorHoodSpace& space, const Vector& u, Centerline which,
                            const std::vector<double>& ordinates, double reynolds = 0.0);

/// Two-column (coordinate, value) reference table with a header line.
struct ReferenceProfile {
  std::vector<double> coordinates;
  std::vector<double> values;
};

/// Reads a CSV whose first column is the coordinate and whose remaining
/// columns are labelled "Re<number>" in the header.
ReferenceProfile read_reference_profile(const std::string& path, double reynolds);

void write_error_header(std::ostream& os);
void write_error_row(std::ostream& os, const ErrorReport& e);
void write_contraction_csv(std::ostream& os, const ContractionTrace& trace);

}  // namespace sivs
