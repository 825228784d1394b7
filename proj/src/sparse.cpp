#include "sivs/sparse.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <ostream>

namespace sivs {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct SparseFactorization::Impl {
  Eigen::SimplicialLLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseFactorization::SparseFactorization(Kind kind) : kind_(kind), impl_(std::make_unique<Impl>()) {}
SparseFactorization::SparseFactorization(SparseFactorization&&) noexcept = default;
SparseFactorization& SparseFactorization::operator=(SparseFactorization&&) noexcept = default;
SparseFactorization::~SparseFactorization() = default;

SparseFactorization SparseFactorization::lu(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw FactorizationError("lu_factorize: matrix is not square");
  SparseFactorization f(Kind::LU);
  f.rows_ = static_cast<int>(a.rows());
  ColMatrix c = a;
  c.makeCompressed();
  f.impl_->lu.analyzePattern(c);
  f.refactorize(a);
  return f;
}

SparseFactorization SparseFactorization::cholesky(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw FactorizationError("cholesky_factorize: matrix is not square");
  SparseFactorization f(Kind::Cholesky);
  f.rows_ = static_cast<int>(a.rows());
  ColMatrix c = a;
  f.impl_->llt.analyzePattern(c);
  f.refactorize(a);
  return f;
}

void SparseFactorization::refactorize(const CsrMatrix& a) {
  if (a.rows() != rows_ || a.cols() != rows_) throw FactorizationError("refactorize: shape changed");
  ColMatrix c = a;
  c.makeCompressed();
  if (kind_ == Kind::Cholesky) {
    impl_->llt.factorize(c);
    if (impl_->llt.info() != Eigen::Success)
      throw FactorizationError("cholesky_factorize: matrix is not positive definite (non-positive pivot)");
  } else {
    impl_->lu.factorize(c);
    if (impl_->lu.info() != Eigen::Success)
      throw FactorizationError("lu_factorize: singular pivot: " + impl_->lu.lastErrorMessage());
  }
}

Vector SparseFactorization::solve(const Vector& b) const {
  if (b.size() != rows_) throw std::invalid_argument("SparseFactorization::solve: size mismatch");
  Vector x = kind_ == Kind::Cholesky ? Vector(impl_->llt.solve(b)) : Vector(impl_->lu.solve(b));
  return x;
}

SparseFactorization lu_factorize(const CsrMatrix& a) { return SparseFactorization::lu(a); }
SparseFactorization cholesky_factorize(const CsrMatrix& a) { return SparseFactorization::cholesky(a); }

CsrMatrix extract(const CsrMatrix& a, const std::vector<int>& row_map, int rows, const std::vector<int>& col_map,
                  int cols) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nonZeros());
  for (int i = 0; i < a.outerSize(); ++i) {
    const int ri = row_map[i];
    if (ri < 0) continue;
    for (CsrMatrix::InnerIterator it(a, i); it; ++it) {
      const int cj = col_map[it.col()];
      if (cj >= 0) trips.emplace_back(ri, cj, it.value());
    }
  }
  CsrMatrix out(rows, cols);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

void write_matrix_market(std::ostream& os, const CsrMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  os.precision(17);
  for (int i = 0; i < a.outerSize(); ++i)
    for (CsrMatrix::InnerIterator it(a, i); it; ++it) os << i + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

Vector SchurOperator::apply(const Vector& q) const {
  if (q.size() != b_->rows()) throw std::invalid_argument("SchurOperator: pressure vector size mismatch");
  const Vector r = b_->transpose() * q;
  Vector out = (*b_) * a_->solve(r);
  project_zero_mean(out);
  return out;
}

Vector schur_apply(const SchurOperator& op, const Vector& q) { return op.apply(q); }

Vector MassPreconditioner::operator()(const Vector& r) const {
  Vector rp = r;
  project_zero_mean(rp);
  Vector z = fact_.solve(rp);
  project_zero_mean(z);
  return z;
}

}  // namespace sivs
