#include "exbound/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/CholmodSupport>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "exbound/errors.hpp"

namespace exbound {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != values_.size()) {
    throw UsageError("inconsistent CSR arrays");
  }
}

CsrMatrix CsrMatrix::from_pattern(std::size_t cols,
                                  const std::vector<std::vector<std::size_t>>& pattern) {
  std::vector<std::size_t> row_ptr(pattern.size() + 1, 0);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    row_ptr[i + 1] = row_ptr[i] + pattern[i].size();
  }
  std::vector<std::size_t> col_idx;
  col_idx.reserve(row_ptr.back());
  for (const auto& row : pattern) col_idx.insert(col_idx.end(), row.begin(), row.end());
  std::vector<double> values(col_idx.size(), 0.0);
  return CsrMatrix(pattern.size(), cols, std::move(row_ptr), std::move(col_idx),
                   std::move(values));
}

void CsrMatrix::add(std::size_t i, std::size_t j, double v) {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) {
    throw UsageError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") outside the sparsity pattern");
  }
  values_[static_cast<std::size_t>(it - col_idx_.begin())] += v;
}

double CsrMatrix::coeff(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(static_cast<Eigen::Index>(rows_));
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

Eigen::VectorXd CsrMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd CsrMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows_));
  for (std::size_t i = 0; i < rows_; ++i) d[i] = coeff(i, i);
  return d;
}

double CsrMatrix::symmetry_error() const {
  double max_abs = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      max_abs = std::max(max_abs, std::abs(values_[k]));
      max_diff = std::max(max_diff, std::abs(values_[k] - coeff(col_idx_[k], i)));
    }
  }
  return max_abs > 0.0 ? max_diff / max_abs : 0.0;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                            static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  }
  return d;
}

CsrMatrix& CsrMatrix::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

CsrMatrix linear_combination(double a, const CsrMatrix& A, double b, const CsrMatrix& B) {
  if (A.row_ptr() != B.row_ptr() || A.col_idx() != B.col_idx()) {
    throw UsageError("linear combination of matrices with different patterns");
  }
  std::vector<double> values(A.nnz());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = a * A.values()[k] + b * B.values()[k];
  return CsrMatrix(A.rows(), A.cols(), A.row_ptr(), A.col_idx(), std::move(values));
}

void ConstraintSet::fix(std::size_t dof, double value) {
  if (!std::isfinite(value)) {
    throw ConstraintError("non-finite constraint value at dof " + std::to_string(dof));
  }
  auto [it, inserted] = values_.emplace(dof, value);
  if (!inserted) {
    const double scale = std::max({1.0, std::abs(it->second), std::abs(value)});
    if (std::abs(it->second - value) > 1e-12 * scale) {
      throw ConstraintError("contradictory constraints at dof " + std::to_string(dof));
    }
  }
}

Eigen::VectorXd ReducedSystem::reconstruct(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd full = lifted;
  for (std::size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = reduced[i];
  return full;
}

Eigen::VectorXd ReducedSystem::restrict_to_free(const Eigen::VectorXd& full) const {
  Eigen::VectorXd r(static_cast<Eigen::Index>(free_dofs.size()));
  for (std::size_t i = 0; i < free_dofs.size(); ++i) r[i] = full[free_dofs[i]];
  return r;
}

ReducedSystem apply_constraints(const CsrMatrix& matrix, const Eigen::VectorXd& rhs,
                                const ConstraintSet& constraints) {
  const std::size_t n = matrix.rows();
  if (matrix.cols() != n || static_cast<std::size_t>(rhs.size()) != n) {
    throw UsageError("constraint elimination needs a square system");
  }
  ReducedSystem sys;
  sys.lifted = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<long> reduced_index(n, 0);
  for (const auto& [dof, value] : constraints.entries()) {
    if (dof >= n) {
      throw ConstraintError("constraint on dof " + std::to_string(dof) + " out of range");
    }
    sys.lifted[dof] = value;
    reduced_index[dof] = -1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reduced_index[i] < 0) continue;
    reduced_index[i] = static_cast<long>(sys.free_dofs.size());
    sys.free_dofs.push_back(i);
  }

  const Eigen::VectorXd lift_product = matrix * sys.lifted;
  const std::size_t nf = sys.free_dofs.size();
  sys.rhs.resize(static_cast<Eigen::Index>(nf));
  std::vector<std::size_t> row_ptr(nf + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(matrix.nnz());
  values.reserve(matrix.nnz());
  const auto& rp = matrix.row_ptr();
  const auto& ci = matrix.col_idx();
  const auto& va = matrix.values();
  for (std::size_t r = 0; r < nf; ++r) {
    const std::size_t i = sys.free_dofs[r];
    sys.rhs[r] = rhs[i] - lift_product[i];
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const long j = reduced_index[ci[k]];
      if (j < 0) continue;
      col_idx.push_back(static_cast<std::size_t>(j));
      values.push_back(va[k]);
    }
    row_ptr[r + 1] = col_idx.size();
  }
  sys.matrix = CsrMatrix(nf, nf, std::move(row_ptr), std::move(col_idx), std::move(values));
  return sys;
}

CgResult solve_cg(const CsrMatrix& A, const Eigen::VectorXd& b, const CgOptions& options,
                  const Eigen::VectorXd* initial_guess) {
  const auto n = static_cast<Eigen::Index>(A.rows());
  if (A.cols() != A.rows() || b.size() != n) throw UsageError("CG needs a square system");
  const std::size_t max_iter =
      options.max_iter > 0 ? options.max_iter : std::max<std::size_t>(10 * A.rows(), 10);

  CgResult res;
  res.x = initial_guess ? *initial_guess : Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (n == 0 || bnorm == 0.0) {
    res.x.setZero(n);
    return res;
  }

  Eigen::VectorXd inv_diag = A.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;

  Eigen::VectorXd r = b - A * res.x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  const double target = options.rel_tol * bnorm;

  while (true) {
    if (r.norm() <= target) {
      // Confirm with the true residual; recursive residuals drift.
      r = b - A * res.x;
      res.relative_residual = r.norm() / bnorm;
      if (res.relative_residual <= options.rel_tol) return res;
      z = inv_diag.cwiseProduct(r);
      p = z;
      rz = r.dot(z);
    }
    if (res.iterations >= max_iter) {
      res.relative_residual = (b - A * res.x).norm() / bnorm;
      throw ConvergenceError("conjugate gradients did not converge in " +
                                 std::to_string(max_iter) + " iterations",
                             res.iterations, res.relative_residual);
    }
    A.multiply(p, ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) {
      res.relative_residual = r.norm() / bnorm;
      throw ConvergenceError("conjugate gradients met a non-positive curvature direction",
                             res.iterations, res.relative_residual);
    }
    const double alpha = rz / pap;
    res.x.noalias() += alpha * p;
    r.noalias() -= alpha * ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    ++res.iterations;
    if (options.record_energy) res.energy.push_back(-0.5 * res.x.dot(b + r));
  }
}

Eigen::VectorXd solve_constrained(const CsrMatrix& A, const Eigen::VectorXd& b,
                                  const ConstraintSet& constraints, const CgOptions& options,
                                  const Eigen::VectorXd* initial_guess, CgResult* stats) {
  const ReducedSystem sys = apply_constraints(A, b, constraints);
  Eigen::VectorXd guess;
  if (initial_guess) guess = sys.restrict_to_free(*initial_guess);
  CgResult res = solve_cg(sys.matrix, sys.rhs, options, initial_guess ? &guess : nullptr);
  Eigen::VectorXd full = sys.reconstruct(res.x);
  if (stats) *stats = std::move(res);
  return full;
}

struct SparseCholesky::Impl {
  std::vector<int> outer;
  std::vector<int> inner;
  std::vector<double> values;
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt;
  bool analyzed = false;
  bool empty = false;

  // The matrix is symmetric, so its CSR arrays are also its CSC arrays.
  Eigen::Map<const Eigen::SparseMatrix<double>> view(const CsrMatrix& m) {
    if (m.rows() != m.cols()) throw UsageError("Cholesky factorization needs a square matrix");
    if (!analyzed) {
      outer.assign(m.row_ptr().begin(), m.row_ptr().end());
      inner.assign(m.col_idx().begin(), m.col_idx().end());
    } else if (outer.size() != m.row_ptr().size() ||
               !std::equal(outer.begin(), outer.end(), m.row_ptr().begin()) ||
               !std::equal(inner.begin(), inner.end(), m.col_idx().begin())) {
      throw UsageError("refactorization with a different sparsity pattern");
    }
    values = m.values();
    const auto n = static_cast<Eigen::Index>(m.rows());
    return {n, n, static_cast<Eigen::Index>(values.size()), outer.data(), inner.data(),
            values.data()};
  }
};

SparseCholesky::SparseCholesky() : impl_(std::make_unique<Impl>()) {}

SparseCholesky::SparseCholesky(const CsrMatrix& matrix) : SparseCholesky() { factorize(matrix); }

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

void SparseCholesky::factorize(const CsrMatrix& matrix) {
  if (matrix.rows() == 0) {
    impl_->outer.assign(1, 0);
    impl_->empty = true;
    impl_->analyzed = true;
    return;
  }
  const auto view = impl_->view(matrix);
  if (!impl_->analyzed) {
    impl_->llt.analyzePattern(view);
    impl_->analyzed = true;
  }
  impl_->llt.factorize(view);
  if (impl_->llt.info() != Eigen::Success) {
    throw Error("Cholesky factorization failed: matrix is not positive definite");
  }
}

Eigen::VectorXd SparseCholesky::solve(const Eigen::VectorXd& rhs) const {
  if (!impl_->analyzed) throw UsageError("solve before factorization");
  if (impl_->empty) return Eigen::VectorXd::Zero(0);
  Eigen::VectorXd x = impl_->llt.solve(rhs);
  if (impl_->llt.info() != Eigen::Success) throw Error("Cholesky solve failed");
  return x;
}

std::size_t SparseCholesky::size() const noexcept { return impl_->outer.empty() ? 0 : impl_->outer.size() - 1; }

}  // namespace exbound
