#include "cone_refine/cones.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

namespace cone_refine {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// Relative slack allowed by the exponential-cone case dispatch. Points
// this close to the cone (or its polar) are treated as members; without
// it, Moreau complements that sit on the boundary up to rounding get
// sent to the Newton branch, whose solution would be the nonsmooth apex.
constexpr double kExpDispatchTol = 1e-10;

void check_dim(const PrimitiveCone& cone, const Vector& x, const char* who) {
  if (x.size() != cone.dim()) {
    throw std::invalid_argument(std::string(who) + ": input has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(cone.dim()));
  }
}

}  // namespace

int PrimitiveCone::dim() const {
  switch (kind) {
    case ConeKind::PsdTriangle:
      return svec_dim(size);
    case ConeKind::ExpPrimal:
    case ConeKind::ExpDual:
      return 3;
    default:
      return size;
  }
}

ConeKind dual_kind(ConeKind kind) {
  switch (kind) {
    case ConeKind::Zero:
      return ConeKind::Free;
    case ConeKind::Free:
      return ConeKind::Zero;
    case ConeKind::ExpPrimal:
      return ConeKind::ExpDual;
    case ConeKind::ExpDual:
      return ConeKind::ExpPrimal;
    default:
      return kind;  // NonNeg, SecondOrder, PsdTriangle are self-dual
  }
}

int ConeSpec::total_dim() const {
  int d = zero + nonneg + 3 * (exp_primal + exp_dual);
  for (int q : soc) d += q;
  for (int s : psd) d += svec_dim(s);
  return d;
}

std::vector<PrimitiveCone> ConeSpec::blocks() const {
  std::vector<PrimitiveCone> out;
  if (zero > 0) out.push_back(PrimitiveCone::zero(zero));
  if (nonneg > 0) out.push_back(PrimitiveCone::nonneg(nonneg));
  for (int q : soc) out.push_back(PrimitiveCone::second_order(q));
  for (int s : psd) out.push_back(PrimitiveCone::psd(s));
  for (int i = 0; i < exp_primal; ++i) out.push_back(PrimitiveCone::exp_primal());
  for (int i = 0; i < exp_dual; ++i) out.push_back(PrimitiveCone::exp_dual());
  return out;
}

void ConeSpec::validate() const {
  if (zero < 0 || nonneg < 0 || exp_primal < 0 || exp_dual < 0) {
    throw std::invalid_argument("ConeSpec: cone counts must be nonnegative");
  }
  for (int q : soc) {
    if (q < 1) throw std::invalid_argument("ConeSpec: second-order cone size must be >= 1");
  }
  for (int s : psd) {
    if (s < 1) throw std::invalid_argument("ConeSpec: PSD matrix order must be >= 1");
  }
}

int svec_dim(int order) { return order * (order + 1) / 2; }

Vector svec(const Matrix& X) {
  const int n = static_cast<int>(X.rows());
  Vector x(svec_dim(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      x[k++] = (i == j) ? X(i, j) : kSqrt2 * X(i, j);
    }
  }
  return x;
}

Matrix smat(const Vector& x) {
  // invert m(m+1)/2 = len
  const int n = static_cast<int>((std::sqrt(8.0 * static_cast<double>(x.size()) + 1.0) - 1.0) / 2.0 + 0.5);
  if (svec_dim(n) != x.size()) {
    throw std::invalid_argument("smat: input length is not a triangle number");
  }
  Matrix X(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = j; i < n; ++i) {
      const double v = (i == j) ? x[k] : x[k] / kSqrt2;
      X(i, j) = v;
      X(j, i) = v;
      ++k;
    }
  }
  return X;
}

// ---------------------------------------------------------------------------
// Second-order cone
// ---------------------------------------------------------------------------

namespace {

Vector soc_project(const Vector& x) {
  const int d = static_cast<int>(x.size());
  const double t = x[0];
  const auto y = x.tail(d - 1);
  const double ny = y.norm();
  if (ny <= t) return x;
  if (ny <= -t) return Vector::Zero(d);
  Vector out(d);
  const double c = 0.5 * (t + ny);
  out[0] = c;
  out.tail(d - 1) = (c / ny) * y;
  return out;
}

// Jacobian-vector product closure for the second-order cone at x.
// Boundary points (||y|| == |t|) use the generic third-branch formula.
std::function<Vector(const Vector&)> soc_derivative(const Vector& x) {
  const int d = static_cast<int>(x.size());
  const double t = x[0];
  Vector y = x.tail(d - 1);
  const double ny = y.norm();
  if (ny == 0.0) {
    // apex line: identity inside, zero below
    if (t >= 0.0) return [](const Vector& dx) { return dx; };
    return [d](const Vector&) { return Vector(Vector::Zero(d)); };
  }
  if (ny < t) return [](const Vector& dx) { return dx; };
  if (ny < -t) return [d](const Vector&) { return Vector(Vector::Zero(d)); };
  return [d, t, ny, y = std::move(y)](const Vector& dx) {
    const double dt = dx[0];
    const auto dy = dx.tail(d - 1);
    const double ydy = y.dot(dy);
    Vector out(d);
    out[0] = 0.5 * dt + ydy / (2.0 * ny);
    out.tail(d - 1) = (dt / (2.0 * ny)) * y + (0.5 * (t + ny) / ny) * dy -
                      (t * ydy / (2.0 * ny * ny * ny)) * y;
    return out;
  };
}

// ---------------------------------------------------------------------------
// PSD cone (scaled-triangle vectorization)
// ---------------------------------------------------------------------------

Vector psd_project(const Vector& x) {
  const Matrix X = smat(x);
  const EigenDecomposition eig = sym_eig(X);
  const Vector lp = eig.eigenvalues.cwiseMax(0.0);
  const Matrix P =
      eig.eigenvectors * lp.asDiagonal() * eig.eigenvectors.transpose();
  return svec(P);
}

// Entry of the Hadamard factor for the projection derivative. Pairs with
// a vanishing denominator (both eigenvalues exactly zero) get 1/2, a
// bounded generalized-Jacobian choice.
double psd_b_entry(double li, double lj) {
  const bool pi = li > 0.0;
  const bool pj = lj > 0.0;
  if (pi && pj) return 1.0;
  if (!pi && !pj) {
    return (li == 0.0 && lj == 0.0) ? 0.5 : 0.0;
  }
  const double pos = pi ? li : lj;
  const double neg = pi ? -lj : -li;  // >= 0
  return pos / (pos + neg);
}

std::function<Vector(const Vector&)> psd_derivative(const Vector& x) {
  const Matrix X = smat(x);
  const EigenDecomposition eig = sym_eig(X);
  const int n = static_cast<int>(X.rows());
  Matrix B(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      B(i, j) = psd_b_entry(eig.eigenvalues[i], eig.eigenvalues[j]);
    }
  }
  return [U = eig.eigenvectors, B = std::move(B)](const Vector& dx) {
    const Matrix M = U.transpose() * smat(dx) * U;
    return svec(Matrix(U * B.cwiseProduct(M) * U.transpose()));
  };
}

// ---------------------------------------------------------------------------
// Exponential cone
// ---------------------------------------------------------------------------

// KKT residual of the curved-branch projection problem at (xs, ys, zs, mu)
// for input (x, y, z).
Eigen::Vector4d exp_kkt_residual(const Eigen::Vector4d& u, const Eigen::Vector3d& v) {
  const double xs = u[0], ys = u[1], zs = u[2], mu = u[3];
  const double e = std::exp(std::min(xs / ys, 500.0));
  Eigen::Vector4d r;
  r[0] = xs - v[0] + mu * e;
  r[1] = ys - v[1] + mu * e * (1.0 - xs / ys);
  r[2] = zs - v[2] - mu;
  r[3] = ys * e - zs;
  return r;
}

// The symmetric 4x4 system matrix of the projection KKT differentials;
// also the Newton Jacobian of exp_kkt_residual.
Eigen::Matrix4d exp_kkt_matrix(double xs, double ys, double mu) {
  const double e = std::exp(std::min(xs / ys, 500.0));
  const double r = xs / ys;
  Eigen::Matrix4d D;
  D << 1.0 + mu * e / ys, -mu * xs * e / (ys * ys), 0.0, e,
      -mu * xs * e / (ys * ys), 1.0 + mu * xs * xs * e / (ys * ys * ys), 0.0,
      (1.0 - r) * e, 0.0, 0.0, 1.0, -1.0, e, (1.0 - r) * e, -1.0, 0.0;
  return D;
}

// Nearest point to v on the ray piece {x <= 0, y = 0, z >= 0} of the
// cone boundary.
Eigen::Vector3d exp_ray_point(const Eigen::Vector3d& v) {
  return {std::min(v[0], 0.0), 0.0, std::max(v[2], 0.0)};
}

// True when the ray point is the projection of v up to floating-point
// resolution: the complement q = v - ray must lie in -K*, evaluated in
// exponential form so the doubly-exponential slack of near-ray inputs
// underflows to an exact comparison. Inputs passing this test with a
// small positive slack have curved-branch parameters far below double
// range (ybar* ~ e^{-1/slack}), so the ray point is the best
// representable answer.
bool exp_ray_optimal(const Eigen::Vector3d& v) {
  const double u = std::max(v[0], 0.0);
  const double w = std::min(v[2], 0.0);
  const double tol = 1e-8 * std::max(1.0, v.norm());
  if (u == 0.0) return v[1] <= tol;
  return u * std::exp(std::min(v[1] / u, 500.0)) <= -2.718281828459045235 * w + tol;
}

// Best point on the curved boundary (rho y, y, y e^rho) along a fixed
// slope rho; the optimal y is a 1-d least-squares solution, clamped
// positive.
double exp_manifold_distance2(const Eigen::Vector3d& v, double rho, double ymin,
                              double* y_out) {
  const double e = std::exp(rho);
  double y = (rho * v[0] + v[1] + e * v[2]) / (rho * rho + 1.0 + e * e);
  y = std::max(y, ymin);
  *y_out = y;
  return (Eigen::Vector3d(rho * y, y, e * y) - v).squaredNorm();
}

// Starting point for the Newton solve: scan slopes on a dense grid,
// refine the best by golden-section, and take the corresponding manifold
// point. Bounded slopes keep every quantity finite for any input.
Eigen::Vector4d exp_newton_init(const Eigen::Vector3d& v) {
  const double scale = std::max(1.0, v.norm());
  const double ymin = 1e-12 * scale;

  double best_dist = std::numeric_limits<double>::infinity();
  double best_rho = 0.0;
  auto consider = [&](double rho) {
    double y;
    const double dist = exp_manifold_distance2(v, rho, ymin, &y);
    if (dist < best_dist) {
      best_dist = dist;
      best_rho = rho;
    }
  };
  for (double rho = -60.0; rho <= 60.0; rho += 0.25) consider(rho);
  if (v[1] > 0.0 && v[2] > 0.0) consider(std::clamp(std::log(v[2] / v[1]), -60.0, 60.0));
  consider(std::clamp(v[0] / std::max(v[1], 1e-6), -60.0, 60.0));

  // golden-section polish of the slope within the winning grid cell
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = best_rho - 0.25, hi = best_rho + 0.25;
  double m1 = hi - kInvPhi * (hi - lo), m2 = lo + kInvPhi * (hi - lo);
  double y1, y2;
  double f1 = exp_manifold_distance2(v, m1, ymin, &y1);
  double f2 = exp_manifold_distance2(v, m2, ymin, &y2);
  for (int i = 0; i < 60; ++i) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - kInvPhi * (hi - lo);
      f1 = exp_manifold_distance2(v, m1, ymin, &y1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + kInvPhi * (hi - lo);
      f2 = exp_manifold_distance2(v, m2, ymin, &y2);
    }
  }
  const double rho = f1 <= f2 ? m1 : m2;
  double y;
  exp_manifold_distance2(v, rho, ymin, &y);

  Eigen::Vector4d u;
  u[0] = rho * y;
  u[1] = y;
  u[2] = y * std::exp(rho);
  u[3] = std::max(u[2] - v[2], 1e-6);
  return u;
}

ExpProjectionResult exp_newton(const Eigen::Vector3d& v) {
  const double scale = std::max(1.0, v.norm());
  const double tol = 1e-12 * scale;

  // The curved-branch parameters of near-ray projections underflow; the
  // KKT system cannot represent those solutions, so return the ray point
  // directly when it is optimal to floating-point resolution.
  if (exp_ray_optimal(v)) {
    return {exp_ray_point(v), std::max(v[2], 0.0) - v[2], ExpCase::Newton};
  }

  Eigen::Vector4d u = exp_newton_init(v);
  Eigen::Vector4d r = exp_kkt_residual(u, v);
  double rnorm = r.norm();
  for (int iter = 0; iter < 200 && rnorm > tol; ++iter) {
    const Eigen::Matrix4d D = exp_kkt_matrix(u[0], u[1], u[3]);
    const Eigen::Vector4d step = D.partialPivLu().solve(-r);
    double t = 1.0;
    while (u[1] + t * step[1] <= 0.0 && t > 1e-30) t *= 0.5;
    // backtrack on the residual norm
    Eigen::Vector4d u_next = u + t * step;
    Eigen::Vector4d r_next = exp_kkt_residual(u_next, v);
    int halvings = 0;
    while (r_next.norm() >= rnorm && halvings < 60) {
      t *= 0.5;
      u_next = u + t * step;
      r_next = exp_kkt_residual(u_next, v);
      ++halvings;
    }
    u = u_next;
    r = r_next;
    rnorm = r.norm();
  }
  const Eigen::Vector3d ray = exp_ray_point(v);
  const double ray_dist = (v - ray).norm();
  const double iter_dist = (v - Eigen::Vector3d(u.head<3>())).norm();
  if (rnorm <= tol) {
    // guard against a spurious stationary point of the (nonconvex)
    // manifold-constrained problem
    if (ray_dist < iter_dist) {
      return {ray, std::max(v[2], 0.0) - v[2], ExpCase::Newton};
    }
    return {u.head<3>(), u[3], ExpCase::Newton};
  }
  // non-convergence: the target is usually below double range near the
  // ray; accept the ray point whenever it is at least as close
  if (ray_dist <= iter_dist * (1.0 + 1e-9) + 1e-12 * scale) {
    return {ray, std::max(v[2], 0.0) - v[2], ExpCase::Newton};
  }
  throw ExpNewtonError(v, u, rnorm);
}

ExpCase exp_classify(const Eigen::Vector3d& v) {
  const double tol = kExpDispatchTol * std::max(1.0, v.norm());
  if (in_exp_cone(v, tol)) return ExpCase::InCone;
  if (in_exp_dual_cone(-v, tol) && !(v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0)) {
    return ExpCase::InPolar;
  }
  if (v[0] < 0.0 && v[1] < 0.0) return ExpCase::ThirdQuadrant;
  return ExpCase::Newton;
}

std::function<Vector(const Vector&)> exp_primal_derivative(const Vector& x) {
  const Eigen::Vector3d v(x[0], x[1], x[2]);
  switch (exp_classify(v)) {
    case ExpCase::InCone:
      return [](const Vector& dx) { return dx; };
    case ExpCase::InPolar:
      return [](const Vector&) { return Vector(Vector::Zero(3)); };
    case ExpCase::ThirdQuadrant: {
      const double z = v[2];
      const double sz = (z > 0.0) ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
      const double g = 0.5 * (1.0 + sz);
      return [g](const Vector& dx) {
        Vector out(3);
        out[0] = dx[0];
        out[1] = 0.0;
        out[2] = g * dx[2];
        return out;
      };
    }
    case ExpCase::Newton:
    default: {
      const ExpProjectionResult res = exp_newton(v);
      if (res.point[1] == 0.0) {
        // projection pinned to the ray piece; diagonal limit of Case 3
        const double gx = v[0] > 0.0 ? 0.0 : (v[0] < 0.0 ? 1.0 : 0.5);
        const double gz = 0.5 * (1.0 + (v[2] > 0.0 ? 1.0 : (v[2] < 0.0 ? -1.0 : 0.0)));
        return [gx, gz](const Vector& dx) {
          Vector out(3);
          out[0] = gx * dx[0];
          out[1] = 0.0;
          out[2] = gz * dx[2];
          return out;
        };
      }
      const Eigen::Matrix4d D =
          exp_kkt_matrix(res.point[0], res.point[1], res.multiplier);
      auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::Matrix4d>>(D);
      if (std::abs(lu->determinant()) == 0.0) {
        throw std::runtime_error(
            "exponential cone derivative: singular 4x4 KKT system");
      }
      return [lu](const Vector& dx) {
        Eigen::Vector4d rhs(dx[0], dx[1], dx[2], 0.0);
        const Eigen::Vector4d sol = lu->solve(rhs);
        Vector out(3);
        out[0] = sol[0];
        out[1] = sol[1];
        out[2] = sol[2];
        return out;
      };
    }
  }
}

// Derivative closure for a single primitive cone at x.
std::function<Vector(const Vector&)> block_derivative(const PrimitiveCone& cone,
                                                      const Vector& x) {
  switch (cone.kind) {
    case ConeKind::Zero: {
      const int d = cone.dim();
      return [d](const Vector&) { return Vector(Vector::Zero(d)); };
    }
    case ConeKind::Free:
      return [](const Vector& dx) { return dx; };
    case ConeKind::NonNeg: {
      // 1/2 (sign(x) + 1), with sign(0) := 0
      Vector g(x.size());
      for (int i = 0; i < x.size(); ++i) {
        g[i] = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? 0.0 : 0.5);
      }
      return [g = std::move(g)](const Vector& dx) {
        return Vector(g.cwiseProduct(dx));
      };
    }
    case ConeKind::SecondOrder:
      return soc_derivative(x);
    case ConeKind::PsdTriangle:
      return psd_derivative(x);
    case ConeKind::ExpPrimal:
      return exp_primal_derivative(x);
    case ConeKind::ExpDual: {
      // Pi_{K*}(x) = x + Pi_K(-x), so D[dx] = dx - DPi_K(-x)[dx]
      auto inner = exp_primal_derivative(Vector(-x));
      return [inner = std::move(inner)](const Vector& dx) {
        return Vector(dx - inner(dx));
      };
    }
  }
  throw std::logic_error("block_derivative: unknown cone kind");
}

}  // namespace

namespace {
std::string exp_newton_error_message(const Eigen::Vector3d& input,
                                     const Eigen::Vector4d& iterate, double residual) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "exponential cone projection: Newton solve did not converge for input "
                "(%.17g, %.17g, %.17g); KKT residual %.3e at (%.6g, %.6g, %.6g, mu=%.6g)",
                input[0], input[1], input[2], residual, iterate[0], iterate[1],
                iterate[2], iterate[3]);
  return buf;
}
}  // namespace

ExpNewtonError::ExpNewtonError(const Eigen::Vector3d& input,
                               const Eigen::Vector4d& iterate, double residual)
    : std::runtime_error(exp_newton_error_message(input, iterate, residual)),
      last_iterate(iterate),
      kkt_residual(residual) {}

bool in_exp_cone(const Eigen::Vector3d& v, double tol) {
  const double x = v[0], y = v[1], z = v[2];
  if (y > 0.0 && z > 0.0 && x <= y * std::log(z / y) + tol) return true;
  return std::abs(y) <= tol && x <= tol && z >= -tol;
}

bool in_exp_dual_cone(const Eigen::Vector3d& v, double tol) {
  const double u = v[0], w = v[1], t = v[2];
  // u < 0: -u e^{w/u} <= e t  <=>  w >= u (1 + log(t / -u))  (t > 0 forced)
  if (u < 0.0 && t > 0.0 && w >= u * (1.0 + std::log(t / -u)) - tol) return true;
  return std::abs(u) <= tol && w >= -tol && t >= -tol;
}

ExpProjectionResult project_exp_primal(const Eigen::Vector3d& v) {
  switch (exp_classify(v)) {
    case ExpCase::InCone:
      return {v, 0.0, ExpCase::InCone};
    case ExpCase::InPolar:
      return {Eigen::Vector3d::Zero(), 0.0, ExpCase::InPolar};
    case ExpCase::ThirdQuadrant:
      return {Eigen::Vector3d(v[0], 0.0, std::max(v[2], 0.0)), 0.0,
              ExpCase::ThirdQuadrant};
    case ExpCase::Newton:
    default:
      return exp_newton(v);
  }
}

Vector project(const PrimitiveCone& cone, const Vector& x) {
  check_dim(cone, x, "project");
  switch (cone.kind) {
    case ConeKind::Zero:
      return Vector::Zero(x.size());
    case ConeKind::Free:
      return x;
    case ConeKind::NonNeg:
      return x.cwiseMax(0.0);
    case ConeKind::SecondOrder:
      return soc_project(x);
    case ConeKind::PsdTriangle:
      return psd_project(x);
    case ConeKind::ExpPrimal: {
      const auto res = project_exp_primal(Eigen::Vector3d(x[0], x[1], x[2]));
      return Vector(res.point);
    }
    case ConeKind::ExpDual: {
      // Moreau: Pi_{K*}(x) = x + Pi_K(-x)
      const auto res = project_exp_primal(Eigen::Vector3d(-x[0], -x[1], -x[2]));
      return Vector(x + Vector(res.point));
    }
  }
  throw std::logic_error("project: unknown cone kind");
}

Vector project_dual(const PrimitiveCone& cone, const Vector& x) {
  check_dim(cone, x, "project_dual");
  return project({dual_kind(cone.kind), cone.size}, x);
}

Vector d_project_apply(const PrimitiveCone& cone, const Vector& x, const Vector& dx) {
  check_dim(cone, x, "d_project_apply");
  check_dim(cone, dx, "d_project_apply");
  return block_derivative(cone, x)(dx);
}

Vector d_project_dual_apply(const PrimitiveCone& cone, const Vector& x,
                            const Vector& dx) {
  check_dim(cone, x, "d_project_dual_apply");
  check_dim(cone, dx, "d_project_dual_apply");
  return block_derivative({dual_kind(cone.kind), cone.size}, x)(dx);
}

namespace {

Vector apply_blockwise(const ConeSpec& spec, const Vector& x, bool dual,
                       const char* who) {
  if (x.size() != spec.total_dim()) {
    throw std::invalid_argument(std::string(who) + ": input has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(spec.total_dim()));
  }
  Vector out(x.size());
  int off = 0;
  for (const PrimitiveCone& cone : spec.blocks()) {
    const int d = cone.dim();
    const PrimitiveCone c = dual ? PrimitiveCone{dual_kind(cone.kind), cone.size} : cone;
    out.segment(off, d) = project(c, x.segment(off, d));
    off += d;
  }
  return out;
}

}  // namespace

Vector project_product(const ConeSpec& spec, const Vector& x) {
  return apply_blockwise(spec, x, false, "project_product");
}

Vector project_product_dual(const ConeSpec& spec, const Vector& x) {
  return apply_blockwise(spec, x, true, "project_product_dual");
}

ProductDerivative::ProductDerivative(const ConeSpec& spec, const Vector& x,
                                     bool dual_cones) {
  dim_ = spec.total_dim();
  if (x.size() != dim_) {
    throw std::invalid_argument("ProductDerivative: point has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
  }
  int off = 0;
  for (const PrimitiveCone& cone : spec.blocks()) {
    const int d = cone.dim();
    const PrimitiveCone c =
        dual_cones ? PrimitiveCone{dual_kind(cone.kind), cone.size} : cone;
    offsets_.push_back(off);
    sizes_.push_back(d);
    block_apply_.push_back(block_derivative(c, x.segment(off, d)));
    off += d;
  }
}

Vector ProductDerivative::apply(const Vector& dx) const {
  if (dx.size() != dim_) {
    throw std::invalid_argument("ProductDerivative::apply: input has length " +
                                std::to_string(dx.size()) + ", expected " +
                                std::to_string(dim_));
  }
  Vector out(dim_);
  for (std::size_t b = 0; b < block_apply_.size(); ++b) {
    out.segment(offsets_[b], sizes_[b]) =
        block_apply_[b](dx.segment(offsets_[b], sizes_[b]));
  }
  return out;
}

Vector d_project_product_apply(const ConeSpec& spec, const Vector& x, const Vector& dx) {
  return ProductDerivative(spec, x, false).apply(dx);
}

Vector d_project_product_dual_apply(const ConeSpec& spec, const Vector& x,
                                    const Vector& dx) {
  return ProductDerivative(spec, x, true).apply(dx);
}

}  // namespace cone_refine
