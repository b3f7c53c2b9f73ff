#include "cone_refine/lsqr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cone_refine {

// Golub-Kahan bidiagonalization with plane rotations, including the
// extra rotation that folds the damping rows into the bidiagonal system.
// Follows the original Paige-Saunders organization; stopping rules use
// the standard test1/test2/test3 estimates.
LsqrResult lsqr_solve(const LinearOperator& op, const Vector& rhs,
                      const LsqrOptions& opts) {
  if (rhs.size() != op.out_dim) {
    throw std::invalid_argument("lsqr_solve: rhs has length " +
                                std::to_string(rhs.size()) + ", expected " +
                                std::to_string(op.out_dim));
  }
  if (!rhs.allFinite()) {
    throw std::runtime_error("lsqr_solve: rhs contains non-finite values");
  }
  if (opts.max_iters < 1) {
    throw std::invalid_argument("lsqr_solve: max_iters must be >= 1");
  }
  if (opts.damping < 0.0) {
    throw std::invalid_argument("lsqr_solve: damping must be >= 0");
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double dampsq = opts.damping * opts.damping;
  const double ctol = opts.conlim > 0.0 ? 1.0 / opts.conlim : 0.0;

  LsqrResult result;
  result.solution = Vector::Zero(op.in_dim);
  Vector& x = result.solution;

  Vector u = rhs;
  double beta = u.norm();
  double alpha = 0.0;
  Vector v = Vector::Zero(op.in_dim);
  if (beta > 0.0) {
    u /= beta;
    v = op.apply_adjoint(u);
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;
  }
  if (alpha * beta == 0.0) {
    // rhs == 0 or A'rhs == 0: x = 0 is already the minimizer
    result.stop_reason = LsqrStopReason::ZeroRhs;
    return result;
  }

  Vector w = v;
  double rhobar = alpha;
  double phibar = beta;
  const double bnorm = beta;
  double anorm = 0.0, ddnorm = 0.0, res2 = 0.0, xxnorm = 0.0;
  double cs2 = -1.0, sn2 = 0.0, zz = 0.0;

  for (int itn = 1; itn <= opts.max_iters; ++itn) {
    // next bidiagonalization step
    u = op.apply(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) {
      u /= beta;
      anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta + dampsq);
      v = op.apply_adjoint(u) - beta * v;
      alpha = v.norm();
      if (alpha > 0.0) v /= alpha;
    }
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
      throw std::runtime_error("lsqr_solve: non-finite values encountered");
    }

    // rotation eliminating the damping row
    const double rhobar1 = std::sqrt(rhobar * rhobar + dampsq);
    const double cs1 = rhobar / rhobar1;
    const double sn1 = opts.damping / rhobar1;
    const double psi = sn1 * phibar;
    phibar = cs1 * phibar;

    // rotation eliminating the subdiagonal beta
    const double rho = std::sqrt(rhobar1 * rhobar1 + beta * beta);
    const double cs = rhobar1 / rho;
    const double sn = beta / rho;
    const double theta = sn * alpha;
    rhobar = -cs * alpha;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    const double tau = sn * phi;

    ddnorm += (w / rho).squaredNorm();
    x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    // running estimate of ||x||
    const double delta = sn2 * rho;
    const double gambar = -cs2 * rho;
    const double rhs_est = phi - delta * zz;
    const double zbar = rhs_est / gambar;
    const double xnorm = std::sqrt(xxnorm + zbar * zbar);
    const double gamma = std::sqrt(gambar * gambar + theta * theta);
    cs2 = gambar / gamma;
    sn2 = theta / gamma;
    zz = rhs_est / gamma;
    xxnorm += zz * zz;

    const double acond = anorm * std::sqrt(ddnorm);
    res2 += psi * psi;
    const double rnorm = std::sqrt(phibar * phibar + res2);  // damped residual
    const double arnorm = alpha * std::abs(tau);
    result.residual_history.push_back(rnorm);
    result.iterations_used = itn;

    const double test1 = rnorm / bnorm;
    const double test2 = arnorm / (anorm * rnorm + eps);
    const double test3 = 1.0 / (acond + eps);
    const double t1 = test1 / (1.0 + anorm * xnorm / bnorm);
    const double rtol = opts.btol + opts.atol * anorm * xnorm / bnorm;

    LsqrStopReason reason = LsqrStopReason::IterationLimit;
    bool stop = itn >= opts.max_iters;
    if (1.0 + test3 <= 1.0) {
      reason = LsqrStopReason::ConditionMachinePrecision;
      stop = true;
    }
    if (1.0 + test2 <= 1.0) {
      reason = LsqrStopReason::LeastSquaresMachinePrecision;
      stop = true;
    }
    if (1.0 + t1 <= 1.0) {
      reason = LsqrStopReason::ResidualMachinePrecision;
      stop = true;
    }
    if (test3 <= ctol) {
      reason = LsqrStopReason::ConditionLimit;
      stop = true;
    }
    if (test2 <= opts.atol) {
      reason = LsqrStopReason::LeastSquaresTolerance;
      stop = true;
    }
    if (test1 <= rtol) {
      reason = LsqrStopReason::ResidualTolerance;
      stop = true;
    }
    if (stop) {
      result.stop_reason = reason;
      break;
    }
  }
  return result;
}

}  // namespace cone_refine
