#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace cone_refine {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sparse matrix in compressed-sparse-column form, 0-based indices,
/// row indices strictly increasing within each column (so duplicate
/// entries are structurally impossible). This is the data convention
/// used by ECOS and SCS.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> colptr;     // length cols+1, colptr[0] == 0
  std::vector<int> rowidx;     // length nnz
  std::vector<double> vals;    // length nnz

  int nnz() const { return static_cast<int>(vals.size()); }

  /// Throws std::invalid_argument naming the violated structural
  /// invariant (shape, colptr monotonicity, row ordering, duplicates).
  void validate() const;

  double frobenius_norm() const;

  /// Dense conversion, intended for small matrices and test oracles.
  Matrix to_dense() const;

  static SparseMatrix identity(int n);
};

/// y = A x
Vector spmv(const SparseMatrix& A, const Vector& x);

/// y = A^T x
Vector spmv_t(const SparseMatrix& A, const Vector& y);

/// Abstract (apply, apply-adjoint, shape) triple. Every structured
/// operator in this library (Q, projection derivatives, residual
/// derivatives) is carried in this form; no operator matrix is ever
/// materialized.
struct LinearOperator {
  int out_dim = 0;
  int in_dim = 0;
  std::function<Vector(const Vector&)> forward;
  std::function<Vector(const Vector&)> adjoint;

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;
};

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthogonal, column i pairs with eigenvalues[i]
};

/// Symmetric eigendecomposition. Input must be symmetric within 1e-12
/// relative tolerance, otherwise throws.
EigenDecomposition sym_eig(const Matrix& X);

}  // namespace cone_refine
