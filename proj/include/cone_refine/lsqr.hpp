#pragma once

#include <vector>

#include "cone_refine/linalg.hpp"

namespace cone_refine {

enum class LsqrStopReason {
  ZeroRhs,                  // rhs (or A'rhs) is zero; solution is zero
  ResidualTolerance,        // residual small relative to atol/btol
  LeastSquaresTolerance,    // A'r small: least-squares solution found
  ConditionLimit,           // condition estimate exceeded conlim
  ResidualMachinePrecision, // residual test limited by machine precision
  LeastSquaresMachinePrecision,
  ConditionMachinePrecision,
  IterationLimit,
};

struct LsqrOptions {
  int max_iters = 30;
  double damping = 0.0;  // sqrt(lambda): solves min ||rhs - A d||^2 + damping^2 ||d||^2
  double atol = 1e-12;
  double btol = 1e-12;
  double conlim = 1e8;
};

struct LsqrResult {
  Vector solution;
  int iterations_used = 0;
  std::vector<double> residual_history;  // damped residual estimate per iteration
  LsqrStopReason stop_reason = LsqrStopReason::IterationLimit;
};

/// Damped LSQR on an abstract linear operator, after Paige and Saunders.
/// Requires only forward and adjoint applications; deterministic for
/// identical inputs.
LsqrResult lsqr_solve(const LinearOperator& op, const Vector& rhs,
                      const LsqrOptions& opts = {});

}  // namespace cone_refine
