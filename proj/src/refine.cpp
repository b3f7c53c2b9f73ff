#include "cone_refine/refine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cone_refine {

namespace {
constexpr double kShortCircuitTol = 1e-14;
}

void RefinementConfig::validate() const {
  if (lambda <= 0.0) throw std::invalid_argument("RefinementConfig: lambda must be > 0");
  if (lsqr_iters < 1 || max_backtracks < 1 || refine_iters < 1) {
    throw std::invalid_argument("RefinementConfig: iteration counts must be >= 1");
  }
}

std::pair<Vector, RefineStepRecord> line_search(const Embedding& emb, const Vector& z,
                                                const Vector& delta,
                                                const RefinementConfig& cfg) {
  const int last = emb.total_dim() - 1;
  const double norm_before = normalized_residual_norm(emb, z);

  RefineStepRecord rec;
  rec.residual_before = norm_before;

  for (int p = 0; p <= cfg.max_backtracks; ++p) {
    const double t = std::ldexp(1.0, -p);  // 2^-p
    Vector candidate = z + t * delta;
    if (candidate[last] == 0.0) continue;  // failed trial, keep backtracking
    const double norm_after = normalized_residual(emb, candidate).norm();
    if (norm_after < norm_before) {
      rec.residual_after = norm_after;
      rec.step_size = t;
      rec.backtracks = p;
      return {std::move(candidate), rec};
    }
  }

  rec.residual_after = norm_before;
  rec.step_size = 0.0;
  rec.backtracks = cfg.max_backtracks;
  rec.failed = true;
  return {z, rec};
}

std::pair<Vector, RefineStepRecord> refine_step(const Embedding& emb, const Vector& z,
                                                const RefinementConfig& cfg) {
  cfg.validate();
  const int last = emb.total_dim() - 1;
  if (z.size() != emb.total_dim()) {
    throw std::invalid_argument("refine_step: z has wrong length");
  }
  if (z[last] == 0.0) {
    throw std::domain_error("refine_step: z has w = 0");
  }

  const Vector nz = normalized_residual(emb, z);
  const LinearOperator dn = d_normalized_residual(emb, z);
  LsqrOptions lsqr_opts;
  lsqr_opts.max_iters = cfg.lsqr_iters;
  lsqr_opts.damping = std::sqrt(cfg.lambda);
  const LsqrResult lm = lsqr_solve(dn, -nz, lsqr_opts);

  auto [z_new, rec] = line_search(emb, z, lm.solution, cfg);
  rec.lsqr_iterations = lm.iterations_used;
  return {std::move(z_new), rec};
}

std::pair<Vector, RefinementReport> refine(const Embedding& emb, const Vector& z0,
                                           const RefinementConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int last = emb.total_dim() - 1;
  if (z0.size() != emb.total_dim()) {
    throw std::invalid_argument("refine: z0 has wrong length");
  }
  if (z0[last] == 0.0) {
    throw std::domain_error("refine: z0 has w = 0");
  }

  RefinementReport report;

  // working at |w| = 1 keeps the LM regularization scale-independent, so
  // refining alpha*z0 follows the same path as refining z0
  Vector z = z0 / std::abs(z0[last]);
  report.initial_residual_norm = normalized_residual_norm(emb, z);
  double current = report.initial_residual_norm;
  for (int iter = 0; iter < cfg.refine_iters; ++iter) {
    if (current <= kShortCircuitTol) {
      report.short_circuited = true;
      break;
    }
    auto [z_next, rec] = refine_step(emb, z, cfg);
    report.steps.push_back(rec);
    if (cfg.verbose) {
      std::fprintf(stderr, "refine step %d: |N| %.6e -> %.6e (t = %g, %d backtracks)%s\n",
                   iter + 1, rec.residual_before, rec.residual_after, rec.step_size,
                   rec.backtracks, rec.failed ? " [failed]" : "");
    }
    if (rec.failed) break;  // every further step from the same z would repeat
    z = z_next / std::abs(z_next[last]);
    current = rec.residual_after;
  }

  report.final_residual_norm = normalized_residual_norm(emb, z);
  if (report.initial_residual_norm == 0.0) {
    report.refinement_factor = 1.0;
  } else {
    const double denom =
        std::max(report.final_residual_norm, std::numeric_limits<double>::min());
    report.refinement_factor = report.initial_residual_norm / denom;
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return {std::move(z), report};
}

}  // namespace cone_refine
