#pragma once

#include <optional>
#include <utility>

#include "cone_refine/kkt.hpp"
#include "cone_refine/linalg.hpp"
#include "cone_refine/program.hpp"

namespace cone_refine {

/// The homogeneous self-dual embedding of a conic program. Points live in
/// R^{m+n+1}; the embedded cone is R^n x K* x R_+ and Q is the
/// skew-symmetric operator assembled from (A, b, c). Holds a reference to
/// the program, which must outlive the embedding.
class Embedding {
 public:
  explicit Embedding(const ConeProgram& program)
      : program_(&program), n_(program.n()), m_(program.m()) {}

  const ConeProgram& program() const { return *program_; }
  int n() const { return n_; }
  int m() const { return m_; }
  int total_dim() const { return m_ + n_ + 1; }

 private:
  const ConeProgram* program_;
  int n_;
  int m_;
};

/// Named views into a point z in R^{m+n+1}.
struct EmbeddedPoint {
  int n = 0;
  int m = 0;
  Vector z;

  auto u1() const { return z.head(n); }
  auto u2() const { return z.segment(n, m); }
  double w() const { return z[n + m]; }
};

enum class SolutionKind { Optimal, PrimalInfeasible, DualInfeasible, Indeterminate };

/// Solution or certificate recovered from an embedded point, with the
/// measured residuals of the matching condition group attached.
struct Classification {
  SolutionKind kind = SolutionKind::Indeterminate;
  Vector x;  // Optimal, DualInfeasible
  Vector y;  // Optimal, PrimalInfeasible
  Vector s;  // Optimal, DualInfeasible
  bool degenerate = false;        // both certificate inner products negative
  bool meets_tolerance = false;   // max residual <= tol * scale
  std::optional<KktReport> residuals;
};

/// u -> Qu, assembled from sparse matvecs.
Vector apply_q(const Embedding& emb, const Vector& u);

/// u -> Q'u = -Qu.
Vector apply_q_adjoint(const Embedding& emb, const Vector& u);

/// Q as a LinearOperator.
LinearOperator q_operator(const Embedding& emb);

/// Projection onto the embedded cone R^n x K* x R_+.
Vector project_embedded(const Embedding& emb, const Vector& z);

/// Jacobian-vector product of project_embedded at z.
Vector d_project_embedded_apply(const Embedding& emb, const Vector& z, const Vector& dz);

/// DPi at z as a (self-adjoint) LinearOperator with per-block state
/// precomputed once.
LinearOperator d_project_embedded_operator(const Embedding& emb, const Vector& z);

/// Residual map R(z) = (Q - I) Pi(z) + z.
Vector residual(const Embedding& emb, const Vector& z);

/// Normalized residual N(z) = R(z) / |w|, w = z_{m+n+1}. Throws
/// std::domain_error when w == 0.
Vector normalized_residual(const Embedding& emb, const Vector& z);
double normalized_residual_norm(const Embedding& emb, const Vector& z);

/// Derivative of R at z as a LinearOperator.
LinearOperator d_residual(const Embedding& emb, const Vector& z);

/// Derivative of N at z as a LinearOperator (forward and adjoint), with
/// R(z) and the projection derivative state captured at construction.
LinearOperator d_normalized_residual(const Embedding& emb, const Vector& z);

/// Minty parametrization M(z) = (Pi z, Pi z - z) and its inverse u - v.
std::pair<Vector, Vector> minty(const Embedding& emb, const Vector& z);
Vector minty_inverse(const Vector& u, const Vector& v);

/// Recover a solution or certificate from z and attach measured
/// residuals. Indeterminate is a value, not an error.
Classification recover(const Embedding& emb, const Vector& z, double tol = 1e-8);

/// Embed an exact solution or certificate: Optimal -> (x, y - s, 1),
/// PrimalInfeasible -> (0, y, -1), DualInfeasible -> (x, -s, -1).
Vector embed_solution(const ConeProgram& program, SolutionKind kind, const Vector& x,
                      const Vector& y, const Vector& s);

const char* solution_kind_name(SolutionKind kind);

}  // namespace cone_refine
