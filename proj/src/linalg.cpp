#include "cone_refine/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cone_refine {

void SparseMatrix::validate() const {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("SparseMatrix: negative dimensions");
  }
  if (static_cast<int>(colptr.size()) != cols + 1) {
    throw std::invalid_argument("SparseMatrix: colptr must have length cols+1, got " +
                                std::to_string(colptr.size()));
  }
  if (colptr.front() != 0) {
    throw std::invalid_argument("SparseMatrix: colptr[0] must be 0");
  }
  if (colptr.back() != nnz() || rowidx.size() != vals.size()) {
    throw std::invalid_argument(
        "SparseMatrix: colptr[cols] must equal len(vals) = len(rowidx)");
  }
  for (int j = 0; j < cols; ++j) {
    if (colptr[j + 1] < colptr[j]) {
      throw std::invalid_argument("SparseMatrix: colptr not nondecreasing at column " +
                                  std::to_string(j));
    }
    if (colptr[j + 1] > nnz()) {
      throw std::invalid_argument("SparseMatrix: colptr exceeds nnz at column " +
                                  std::to_string(j));
    }
    for (int k = colptr[j]; k < colptr[j + 1]; ++k) {
      if (rowidx[k] < 0 || rowidx[k] >= rows) {
        throw std::invalid_argument("SparseMatrix: row index out of range in column " +
                                    std::to_string(j));
      }
      if (k > colptr[j] && rowidx[k] <= rowidx[k - 1]) {
        // also rejects duplicate entries
        throw std::invalid_argument(
            "SparseMatrix: row indices not strictly increasing in column " +
            std::to_string(j));
      }
    }
  }
}

double SparseMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (double v : vals) acc += v * v;
  return std::sqrt(acc);
}

Matrix SparseMatrix::to_dense() const {
  Matrix D = Matrix::Zero(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int k = colptr[j]; k < colptr[j + 1]; ++k) D(rowidx[k], j) = vals[k];
  }
  return D;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix A;
  A.rows = A.cols = n;
  A.colptr.resize(n + 1);
  A.rowidx.resize(n);
  A.vals.assign(n, 1.0);
  for (int j = 0; j <= n; ++j) A.colptr[j] = j;
  for (int j = 0; j < n; ++j) A.rowidx[j] = j;
  return A;
}

Vector spmv(const SparseMatrix& A, const Vector& x) {
  if (x.size() != A.cols) {
    throw std::invalid_argument("spmv: x has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(A.cols));
  }
  Vector y = Vector::Zero(A.rows);
  for (int j = 0; j < A.cols; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (int k = A.colptr[j]; k < A.colptr[j + 1]; ++k) {
      y[A.rowidx[k]] += A.vals[k] * xj;
    }
  }
  return y;
}

Vector spmv_t(const SparseMatrix& A, const Vector& y) {
  if (y.size() != A.rows) {
    throw std::invalid_argument("spmv_t: y has length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(A.rows));
  }
  Vector x = Vector::Zero(A.cols);
  for (int j = 0; j < A.cols; ++j) {
    double acc = 0.0;
    for (int k = A.colptr[j]; k < A.colptr[j + 1]; ++k) {
      acc += A.vals[k] * y[A.rowidx[k]];
    }
    x[j] = acc;
  }
  return x;
}

Vector LinearOperator::apply(const Vector& x) const {
  if (x.size() != in_dim) {
    throw std::invalid_argument("LinearOperator::apply: input has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(in_dim));
  }
  return forward(x);
}

Vector LinearOperator::apply_adjoint(const Vector& y) const {
  if (y.size() != out_dim) {
    throw std::invalid_argument("LinearOperator::apply_adjoint: input has length " +
                                std::to_string(y.size()) + ", expected " +
                                std::to_string(out_dim));
  }
  return adjoint(y);
}

EigenDecomposition sym_eig(const Matrix& X) {
  if (X.rows() != X.cols()) {
    throw std::invalid_argument("sym_eig: matrix is not square");
  }
  const double scale = std::max(1.0, X.norm());
  if ((X - X.transpose()).norm() > 1e-12 * scale) {
    throw std::invalid_argument("sym_eig: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (X + X.transpose()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eig: eigendecomposition failed to converge");
  }
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace cone_refine
