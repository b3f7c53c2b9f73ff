#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "cone_refine/linalg.hpp"

namespace cone_refine {

enum class ConeKind { Zero, Free, NonNeg, SecondOrder, PsdTriangle, ExpPrimal, ExpDual };

/// One factor of a product cone. `size` is the vector dimension for
/// Zero/Free/NonNeg/SecondOrder and the matrix order for PsdTriangle;
/// exponential cones always occupy 3 coordinates.
struct PrimitiveCone {
  ConeKind kind;
  int size = 0;

  static PrimitiveCone zero(int d) { return {ConeKind::Zero, d}; }
  static PrimitiveCone free(int d) { return {ConeKind::Free, d}; }
  static PrimitiveCone nonneg(int d) { return {ConeKind::NonNeg, d}; }
  static PrimitiveCone second_order(int d) { return {ConeKind::SecondOrder, d}; }
  static PrimitiveCone psd(int order) { return {ConeKind::PsdTriangle, order}; }
  static PrimitiveCone exp_primal() { return {ConeKind::ExpPrimal, 3}; }
  static PrimitiveCone exp_dual() { return {ConeKind::ExpDual, 3}; }

  /// Dimension of the vectorized cone.
  int dim() const;
};

/// The cone such that y is in it iff <x, y> >= 0 for all x in `kind`'s cone.
ConeKind dual_kind(ConeKind kind);

/// Ordered product of primitive cones: zero, nonnegative, second-order
/// blocks, PSD blocks (scaled lower-triangle vectorization), primal
/// exponential triples, dual exponential triples.
struct ConeSpec {
  int zero = 0;
  int nonneg = 0;
  std::vector<int> soc;  // second-order cone sizes
  std::vector<int> psd;  // PSD matrix orders
  int exp_primal = 0;
  int exp_dual = 0;

  int total_dim() const;
  std::vector<PrimitiveCone> blocks() const;
  void validate() const;
};

enum class ExpCase { InCone, InPolar, ThirdQuadrant, Newton };

/// Result of projecting onto the primal exponential cone; `multiplier`
/// and `case_id` are meaningful diagnostics for the Newton branch.
struct ExpProjectionResult {
  Eigen::Vector3d point;
  double multiplier = 0.0;
  ExpCase case_id = ExpCase::InCone;
};

/// Thrown when the exponential-cone Newton solve fails to reach its
/// residual tolerance within the iteration budget.
class ExpNewtonError : public std::runtime_error {
 public:
  ExpNewtonError(const Eigen::Vector3d& input, const Eigen::Vector4d& iterate, double residual);
  Eigen::Vector4d last_iterate;
  double kkt_residual;
};

/// Membership tests for the exponential cone and its dual (closed sets;
/// `tol` widens the boundary, 0 means exact comparisons).
bool in_exp_cone(const Eigen::Vector3d& v, double tol = 0.0);
bool in_exp_dual_cone(const Eigen::Vector3d& v, double tol = 0.0);

/// Projection onto the primal exponential cone with case diagnostics.
ExpProjectionResult project_exp_primal(const Eigen::Vector3d& v);

/// Euclidean projection onto the cone.
Vector project(const PrimitiveCone& cone, const Vector& x);

/// Projection onto the dual cone (identical to `project` for the
/// self-dual kinds, Zero/Free and ExpPrimal/ExpDual swap).
Vector project_dual(const PrimitiveCone& cone, const Vector& x);

/// Jacobian-vector product dx -> DPi(x)[dx]; linear in dx and
/// self-adjoint. No dense Jacobian is formed.
Vector d_project_apply(const PrimitiveCone& cone, const Vector& x, const Vector& dx);

/// Jacobian-vector product of `project_dual` at x.
Vector d_project_dual_apply(const PrimitiveCone& cone, const Vector& x, const Vector& dx);

/// Blockwise projection onto the product cone (or its dual).
Vector project_product(const ConeSpec& spec, const Vector& x);
Vector project_product_dual(const ConeSpec& spec, const Vector& x);

/// Derivative of the product-cone projection at a fixed point, with
/// per-block state (eigendecompositions, Newton solutions) computed once
/// at construction so repeated applications are cheap.
class ProductDerivative {
 public:
  ProductDerivative(const ConeSpec& spec, const Vector& x, bool dual_cones = false);

  Vector apply(const Vector& dx) const;
  int dim() const { return dim_; }

 private:
  int dim_ = 0;
  std::vector<int> offsets_;
  std::vector<int> sizes_;
  std::vector<std::function<Vector(const Vector&)>> block_apply_;
};

/// One-shot blockwise Jacobian-vector products.
Vector d_project_product_apply(const ConeSpec& spec, const Vector& x, const Vector& dx);
Vector d_project_product_dual_apply(const ConeSpec& spec, const Vector& x, const Vector& dx);

/// Scaled-triangle vectorization of symmetric matrices: lower triangle,
/// column-major, off-diagonal entries multiplied by sqrt(2), so vector
/// inner products equal Frobenius inner products.
int svec_dim(int order);
Vector svec(const Matrix& X);
Matrix smat(const Vector& x);

}  // namespace cone_refine
