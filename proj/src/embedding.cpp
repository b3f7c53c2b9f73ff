#include "cone_refine/embedding.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace cone_refine {

namespace {

void check_total_dim(const Embedding& emb, const Vector& z, const char* who) {
  if (z.size() != emb.total_dim()) {
    throw std::invalid_argument(std::string(who) + ": input has length " +
                                std::to_string(z.size()) + ", expected " +
                                std::to_string(emb.total_dim()));
  }
}

double require_nonzero_w(const Embedding& emb, const Vector& z, const char* who) {
  const double w = z[emb.total_dim() - 1];
  if (w == 0.0) {
    throw std::domain_error(std::string(who) +
                            ": last coordinate w is zero (outside the domain "
                            "of the normalized residual)");
  }
  return w;
}

}  // namespace

void ConeProgram::validate() const {
  A.validate();
  cones.validate();
  if (b.size() != A.rows) {
    throw std::invalid_argument("ConeProgram: b has length " + std::to_string(b.size()) +
                                ", expected m = " + std::to_string(A.rows));
  }
  if (c.size() != A.cols) {
    throw std::invalid_argument("ConeProgram: c has length " + std::to_string(c.size()) +
                                ", expected n = " + std::to_string(A.cols));
  }
  if (cones.total_dim() != A.rows) {
    throw std::invalid_argument("ConeProgram: cone dimensions sum to " +
                                std::to_string(cones.total_dim()) + ", expected m = " +
                                std::to_string(A.rows));
  }
}

Vector apply_q(const Embedding& emb, const Vector& u) {
  check_total_dim(emb, u, "apply_q");
  const ConeProgram& p = emb.program();
  const int n = emb.n(), m = emb.m();
  const double w = u[n + m];
  Vector out(n + m + 1);
  out.head(n) = spmv_t(p.A, u.segment(n, m)) + w * p.c;
  out.segment(n, m) = -spmv(p.A, u.head(n)) + w * p.b;
  out[n + m] = -p.c.dot(u.head(n)) - p.b.dot(u.segment(n, m));
  return out;
}

Vector apply_q_adjoint(const Embedding& emb, const Vector& u) {
  return -apply_q(emb, u);
}

LinearOperator q_operator(const Embedding& emb) {
  const int dim = emb.total_dim();
  return LinearOperator{
      dim, dim, [emb](const Vector& u) { return apply_q(emb, u); },
      [emb](const Vector& u) { return apply_q_adjoint(emb, u); }};
}

Vector project_embedded(const Embedding& emb, const Vector& z) {
  check_total_dim(emb, z, "project_embedded");
  const int n = emb.n(), m = emb.m();
  Vector out(n + m + 1);
  out.head(n) = z.head(n);
  out.segment(n, m) = project_product_dual(emb.program().cones, z.segment(n, m));
  out[n + m] = std::max(z[n + m], 0.0);
  return out;
}

Vector d_project_embedded_apply(const Embedding& emb, const Vector& z, const Vector& dz) {
  return d_project_embedded_operator(emb, z).apply(dz);
}

LinearOperator d_project_embedded_operator(const Embedding& emb, const Vector& z) {
  check_total_dim(emb, z, "d_project_embedded_operator");
  const int n = emb.n(), m = emb.m();
  auto middle = std::make_shared<ProductDerivative>(emb.program().cones,
                                                    Vector(z.segment(n, m)),
                                                    /*dual_cones=*/true);
  const double w = z[n + m];
  const double wgrad = w > 0.0 ? 1.0 : (w < 0.0 ? 0.0 : 0.5);
  auto apply = [n, m, middle, wgrad](const Vector& v) {
    Vector out(n + m + 1);
    out.head(n) = v.head(n);
    out.segment(n, m) = middle->apply(v.segment(n, m));
    out[n + m] = wgrad * v[n + m];
    return out;
  };
  // self-adjoint: blockwise diagonal with self-adjoint blocks
  return LinearOperator{n + m + 1, n + m + 1, apply, apply};
}

Vector residual(const Embedding& emb, const Vector& z) {
  check_total_dim(emb, z, "residual");
  const Vector pz = project_embedded(emb, z);
  const Vector pstar = z - pz;  // projection onto the polar cone
  return apply_q(emb, pz) + pstar;
}

Vector normalized_residual(const Embedding& emb, const Vector& z) {
  const double w = require_nonzero_w(emb, z, "normalized_residual");
  return residual(emb, z) / std::abs(w);
}

double normalized_residual_norm(const Embedding& emb, const Vector& z) {
  return normalized_residual(emb, z).norm();
}

LinearOperator d_residual(const Embedding& emb, const Vector& z) {
  check_total_dim(emb, z, "d_residual");
  auto dpi = std::make_shared<LinearOperator>(d_project_embedded_operator(emb, z));
  const int dim = emb.total_dim();
  auto fwd = [emb, dpi](const Vector& v) {
    const Vector p = dpi->forward(v);
    return Vector(apply_q(emb, p) - p + v);
  };
  auto adj = [emb, dpi](const Vector& u) {
    const Vector h = -(apply_q(emb, u) + u);  // (Q - I)' u = (-Q - I) u
    return Vector(dpi->forward(h) + u);
  };
  return LinearOperator{dim, dim, fwd, adj};
}

LinearOperator d_normalized_residual(const Embedding& emb, const Vector& z) {
  const double w = require_nonzero_w(emb, z, "d_normalized_residual");
  const int dim = emb.total_dim();
  auto dpi = std::make_shared<LinearOperator>(d_project_embedded_operator(emb, z));
  auto rz = std::make_shared<Vector>(residual(emb, z));
  const double aw = std::abs(w);
  // d(1/|w|)/dw = -sign(w)/w^2; for w > 0 this reduces to the familiar
  // DR/w - R/w^2 e' form.
  const double sw2 = (w > 0.0 ? 1.0 : -1.0) / (w * w);
  auto fwd = [emb, dpi, rz, aw, sw2, dim](const Vector& v) {
    const Vector p = dpi->forward(v);
    Vector out = (apply_q(emb, p) - p + v) / aw;
    out -= (sw2 * v[dim - 1]) * (*rz);
    return out;
  };
  auto adj = [emb, dpi, rz, aw, sw2, dim](const Vector& u) {
    const Vector h = -(apply_q(emb, u) + u);
    Vector out = (dpi->forward(h) + u) / aw;
    out[dim - 1] -= sw2 * rz->dot(u);
    return out;
  };
  return LinearOperator{dim, dim, fwd, adj};
}

std::pair<Vector, Vector> minty(const Embedding& emb, const Vector& z) {
  check_total_dim(emb, z, "minty");
  Vector u = project_embedded(emb, z);
  Vector v = u - z;
  return {std::move(u), std::move(v)};
}

Vector minty_inverse(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("minty_inverse: u and v have mismatched lengths");
  }
  return u - v;
}

Classification recover(const Embedding& emb, const Vector& z, double tol) {
  check_total_dim(emb, z, "recover");
  const int n = emb.n(), m = emb.m();
  const auto [u, v] = minty(emb, z);
  const double tau = u[n + m];
  const double kappa = v[n + m];

  Classification cls;
  if (tau > kappa && tau > 0.0) {
    cls.kind = SolutionKind::Optimal;
    cls.x = u.head(n) / tau;
    cls.y = u.segment(n, m) / tau;
    cls.s = v.segment(n, m) / tau;
    cls.residuals = kkt_residuals(emb.program(), cls);
  } else if (kappa > 0.0) {
    const double bu2 = emb.program().b.dot(u.segment(n, m));
    const double cu1 = emb.program().c.dot(u.head(n));
    const bool degenerate = bu2 < 0.0 && cu1 < 0.0;
    std::optional<Classification> primal_inf, dual_inf;
    if (bu2 < 0.0) {
      Classification cand;
      cand.kind = SolutionKind::PrimalInfeasible;
      cand.y = u.segment(n, m) / -bu2;  // scale so b'y = -1 and y stays in K*
      cand.degenerate = degenerate;
      cand.residuals = kkt_residuals(emb.program(), cand);
      primal_inf = std::move(cand);
    }
    if (cu1 < 0.0) {
      Classification cand;
      cand.kind = SolutionKind::DualInfeasible;
      cand.x = u.head(n) / -cu1;  // scale so c'x = -1
      cand.s = v.segment(n, m) / -cu1;
      cand.degenerate = degenerate;
      cand.residuals = kkt_residuals(emb.program(), cand);
      dual_inf = std::move(cand);
    }
    // At an exact solution the sign tests alone identify the case, but
    // for approximate z a vanishing inner product can land on either
    // side of zero; keep the candidate whose measured certificate
    // residuals are smaller. Primal infeasibility wins ties (including
    // the degenerate both-certificates case).
    if (primal_inf.has_value() && dual_inf.has_value()) {
      cls = primal_inf->residuals->max_norm2() <= dual_inf->residuals->max_norm2()
                ? std::move(*primal_inf)
                : std::move(*dual_inf);
    } else if (primal_inf.has_value()) {
      cls = std::move(*primal_inf);
    } else if (dual_inf.has_value()) {
      cls = std::move(*dual_inf);
    }
  }
  if (cls.residuals.has_value()) {
    double scale = std::max(1.0, z.norm());
    cls.meets_tolerance = cls.residuals->max_norm2() <= tol * scale;
  }
  return cls;
}

Vector embed_solution(const ConeProgram& program, SolutionKind kind, const Vector& x,
                      const Vector& y, const Vector& s) {
  const int n = program.n(), m = program.m();
  auto check_len = [](const Vector& v, int len, const char* name) {
    if (v.size() != len) {
      throw std::invalid_argument(std::string("embed_solution: ") + name +
                                  " has length " + std::to_string(v.size()) +
                                  ", expected " + std::to_string(len));
    }
  };
  Vector z(n + m + 1);
  switch (kind) {
    case SolutionKind::Optimal:
      // u = (x, y, 1), v = (0, s, 0)
      check_len(x, n, "x");
      check_len(y, m, "y");
      check_len(s, m, "s");
      z.head(n) = x;
      z.segment(n, m) = y - s;
      z[n + m] = 1.0;
      return z;
    case SolutionKind::PrimalInfeasible:
      // u = (0, y, 0), v = (0, 0, 1)
      check_len(y, m, "y");
      z.head(n).setZero();
      z.segment(n, m) = y;
      z[n + m] = -1.0;
      return z;
    case SolutionKind::DualInfeasible:
      // u = (x, 0, 0), v = (0, s, 1)
      check_len(x, n, "x");
      check_len(s, m, "s");
      z.head(n) = x;
      z.segment(n, m) = -s;
      z[n + m] = -1.0;
      return z;
    case SolutionKind::Indeterminate:
      break;
  }
  throw std::invalid_argument("embed_solution: nothing to embed for Indeterminate");
}

const char* solution_kind_name(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::Optimal:
      return "optimal";
    case SolutionKind::PrimalInfeasible:
      return "primal_infeasible";
    case SolutionKind::DualInfeasible:
      return "dual_infeasible";
    case SolutionKind::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

}  // namespace cone_refine
