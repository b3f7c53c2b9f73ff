#pragma once

#include <utility>
#include <vector>

#include "cone_refine/embedding.hpp"
#include "cone_refine/lsqr.hpp"

namespace cone_refine {

struct RefinementConfig {
  int lsqr_iters = 30;
  double lambda = 1e-8;    // Levenberg-Marquardt regularization
  int max_backtracks = 10; // line search tries t = 2^-p for p in {0..max_backtracks}
  int refine_iters = 2;
  bool verbose = false;

  void validate() const;
};

struct RefineStepRecord {
  double residual_before = 0.0;
  double residual_after = 0.0;
  double step_size = 0.0;  // accepted t, 0 on failure
  int backtracks = 0;      // p of the accepted trial
  int lsqr_iterations = 0;
  bool failed = false;
};

struct RefinementReport {
  std::vector<RefineStepRecord> steps;
  double initial_residual_norm = 0.0;
  double final_residual_norm = 0.0;
  double refinement_factor = 1.0;
  double wall_time_ms = 0.0;
  bool short_circuited = false;  // ||N(z)|| already below 1e-14
};

/// Backtracking line search along delta: accepts the first t = 2^-p,
/// p in {0..max_backtracks}, with ||N(z + t delta)|| < ||N(z)||; trials
/// whose last coordinate lands exactly on zero are rejected and the
/// search continues. On exhaustion returns z unchanged with failed =
/// true and step_size 0.
std::pair<Vector, RefineStepRecord> line_search(const Embedding& emb, const Vector& z,
                                                const Vector& delta,
                                                const RefinementConfig& cfg);

/// One Levenberg-Marquardt step: truncated LSQR on
///   min ||N(z) + DN(z) d||^2 + lambda ||d||^2,
/// then the backtracking line search above.
std::pair<Vector, RefineStepRecord> refine_step(const Embedding& emb, const Vector& z,
                                                const RefinementConfig& cfg);

/// Iterated refinement: applies refine_step cfg.refine_iters times,
/// renormalizing z <- z/|w| after each accepted step; stops early on a
/// failed step or once ||N(z)|| <= 1e-14. The final residual norm never
/// exceeds the initial one.
std::pair<Vector, RefinementReport> refine(const Embedding& emb, const Vector& z0,
                                           const RefinementConfig& cfg = {});

}  // namespace cone_refine
