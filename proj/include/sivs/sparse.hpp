#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cmath>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sivs {

using Vector = Eigen::VectorXd;
/// Compressed sparse row storage with sorted, duplicate-free column indices.
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reusable direct factorization of a square sparse matrix: sparse Cholesky
/// (AMD ordering) for SPD input, sparse LU (COLAMD ordering) otherwise.
/// Move-only; solves are const and may be issued repeatedly.
class SparseFactorization {
 public:
  enum class Kind { Cholesky, LU };

  SparseFactorization(SparseFactorization&&) noexcept;
  SparseFactorization& operator=(SparseFactorization&&) noexcept;
  ~SparseFactorization();

  static SparseFactorization lu(const CsrMatrix& a);
  static SparseFactorization cholesky(const CsrMatrix& a);

  /// Numeric refactorization for a matrix with the original sparsity pattern.
  void refactorize(const CsrMatrix& a);

  Vector solve(const Vector& b) const;

  Kind kind() const { return kind_; }
  bool spd() const { return kind_ == Kind::Cholesky; }
  int rows() const { return rows_; }

 private:
  struct Impl;
  explicit SparseFactorization(Kind kind);

  Kind kind_;
  int rows_ = 0;
  std::unique_ptr<Impl> impl_;
};

SparseFactorization lu_factorize(const CsrMatrix& a);
SparseFactorization cholesky_factorize(const CsrMatrix& a);

/// Submatrix selection through index maps (full index -> local index, or -1).
CsrMatrix extract(const CsrMatrix& a, const std::vector<int>& row_map, int rows,
                  const std::vector<int>& col_map, int cols);

/// Matrix-exchange coordinate text: header, size line, 1-based triplets.
void write_matrix_market(std::ostream& os, const CsrMatrix& a);

inline void project_zero_mean(Vector& v) {
  if (v.size() > 0) v.array() -= v.mean();
}

struct KrylovStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradients from a zero initial guess.
///
/// Stops when sqrt(r'z) <= tol * sqrt(r0'z0). Non-positive curvature p'Ap
/// throws SolverError. For semidefinite operators the caller passes a
/// right-hand side in the range and a preconditioner that stays in it.
template <typename Apply, typename Precond>
KrylovStats conjugate_gradient(const Apply& apply, const Vector& rhs, const Precond& precond, Vector& x,
                               double tol, int maxit) {
  KrylovStats stats;
  x = Vector::Zero(rhs.size());
  Vector r = rhs;
  Vector z = precond(r);
  double rz = r.dot(z);
  if (rz < 0.0) throw SolverError("conjugate_gradient: preconditioner is not positive definite");
  const double rz0 = rz;
  if (rhs.squaredNorm() == 0.0 || rz0 == 0.0) {
    stats.converged = true;
    return stats;
  }
  Vector p = z;
  for (int it = 1; it <= maxit; ++it) {
    const Vector ap = apply(p);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0)) throw SolverError("conjugate_gradient: operator is not SPD (p'Ap <= 0)");
    const double alpha = rz / curvature;
    x += alpha * p;
    r -= alpha * ap;
    z = precond(r);
    const double rz_new = r.dot(z);
    stats.iterations = it;
    stats.relative_residual = std::sqrt(std::max(rz_new, 0.0) / rz0);
    if (stats.relative_residual <= tol) {
      stats.converged = true;
      return stats;
    }
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return stats;
}

/// Action of S = B_f * A_ff^{-1} * B_f^T on pressure vectors, followed by
/// projection onto zero algebraic mean. Never forms S.
class SchurOperator {
 public:
  SchurOperator(const CsrMatrix& b_free, const SparseFactorization& a_free) : b_(&b_free), a_(&a_free) {}

  Vector apply(const Vector& q) const;
  Vector operator()(const Vector& q) const { return apply(q); }

  int size() const { return static_cast<int>(b_->rows()); }

 private:
  const CsrMatrix* b_;
  const SparseFactorization* a_;
};

Vector schur_apply(const SchurOperator& op, const Vector& q);

/// z = P Mp^{-1} P r, P the zero-mean projector.
class MassPreconditioner {
 public:
  explicit MassPreconditioner(const CsrMatrix& mass) : fact_(cholesky_factorize(mass)) {}
  Vector operator()(const Vector& r) const;

 private:
  SparseFactorization fact_;
};

}  // namespace sivs
