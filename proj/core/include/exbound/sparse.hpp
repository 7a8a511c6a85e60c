#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace exbound {

/// Compressed-row sparse matrix with a fixed sparsity pattern.
///
/// Column indices within a row are sorted; add() locates entries by binary
/// search and refuses entries outside the pattern.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values);

  // Zero matrix with the given per-row column sets (each sorted and unique).
  static CsrMatrix from_pattern(std::size_t cols,
                                const std::vector<std::vector<std::size_t>>& pattern);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  void add(std::size_t i, std::size_t j, double v);
  double coeff(std::size_t i, std::size_t j) const;

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const { return x.dot(*this * x); }
  double bilinear_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.dot(*this * y);
  }

  Eigen::VectorXd diagonal() const;
  // max |a_ij - a_ji| relative to max |a_ij|.
  double symmetry_error() const;
  Eigen::MatrixXd to_dense() const;

  CsrMatrix& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// a * A + b * B for two matrices with identical patterns.
CsrMatrix linear_combination(double a, const CsrMatrix& A, double b, const CsrMatrix& B);

/// Dof index -> prescribed value. Re-fixing a dof to the same value is allowed;
/// to a different value is a ConstraintError.
class ConstraintSet {
 public:
  void fix(std::size_t dof, double value);
  bool contains(std::size_t dof) const { return values_.contains(dof); }
  double value(std::size_t dof) const { return values_.at(dof); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::map<std::size_t, double>& entries() const noexcept { return values_; }

 private:
  std::map<std::size_t, double> values_;
};

/// System restricted to the free dofs, with the constrained values lifted to
/// the right-hand side (symmetric elimination).
struct ReducedSystem {
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> free_dofs;
  Eigen::VectorXd lifted;  // full-length: constraint values, zero on free dofs

  Eigen::VectorXd reconstruct(const Eigen::VectorXd& reduced) const;
  Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full) const;
};

ReducedSystem apply_constraints(const CsrMatrix& matrix, const Eigen::VectorXd& rhs,
                                const ConstraintSet& constraints);

struct CgOptions {
  double rel_tol = 1e-10;
  std::size_t max_iter = 0;  // 0: ten times the system size
  bool record_energy = false;
};

struct CgResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  // 0.5 x'Ax - b'x after each iteration, when requested.
  std::vector<double> energy;
};

// Jacobi-preconditioned conjugate gradients. Stops once ||b - Ax|| <= rel_tol ||b||
// holds for the true residual; throws ConvergenceError past max_iter.
CgResult solve_cg(const CsrMatrix& A, const Eigen::VectorXd& b, const CgOptions& options = {},
                  const Eigen::VectorXd* initial_guess = nullptr);

// Constrained solve: eliminate, run CG on the free dofs, reconstruct.
Eigen::VectorXd solve_constrained(const CsrMatrix& A, const Eigen::VectorXd& b,
                                  const ConstraintSet& constraints, const CgOptions& options,
                                  const Eigen::VectorXd* initial_guess = nullptr,
                                  CgResult* stats = nullptr);

/// Sparse Cholesky factorization (CHOLMOD supernodal) of an SPD matrix.
///
/// factorize() may be called again with a matrix of the same pattern; the
/// symbolic analysis is reused. Throws Error if the matrix is not positive
/// definite.
class SparseCholesky {
 public:
  SparseCholesky();
  explicit SparseCholesky(const CsrMatrix& matrix);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;

  void factorize(const CsrMatrix& matrix);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  std::size_t size() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace exbound
