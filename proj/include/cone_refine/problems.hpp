#pragma once

#include <cstdint>
#include <optional>

#include "cone_refine/embedding.hpp"
#include "cone_refine/program.hpp"
#include "cone_refine/rng.hpp"

namespace cone_refine {

enum class InstanceKind { Feasible, Infeasible, Unbounded };

const char* instance_kind_name(InstanceKind kind);
SolutionKind instance_to_solution_kind(InstanceKind kind);

struct IntRange {
  int lo = 0;
  int hi = 0;
};

/// Ranges the generator draws cone sizes from. `paper` reproduces the
/// reference experiment ranges; `tiny` keeps instances desk-scale for
/// tests.
struct SizeProfile {
  IntRange zero, nonneg;
  IntRange soc_count, soc_size;
  IntRange psd_count, psd_order;
  IntRange exp_primal_count, exp_dual_count;

  static SizeProfile paper();
  static SizeProfile tiny();
  static std::optional<SizeProfile> by_name(const std::string& name);
};

/// A generated program together with the exact witness used to build it:
/// (x, y, s) for feasible instances, y for infeasible ones, (x, s) for
/// unbounded ones.
struct GeneratedInstance {
  ConeProgram program;
  InstanceKind kind = InstanceKind::Feasible;
  Vector x, y, s;
  std::uint64_t seed = 0;
};

/// Draws an instance deterministically from the seed. All randomness
/// flows through Rng (xoshiro256++), so instances are identical across
/// platforms. `force_kind` overrides the 0.8/0.1/0.1 kind draw.
GeneratedInstance generate(std::uint64_t seed, const SizeProfile& profile = SizeProfile::paper(),
                           std::optional<InstanceKind> force_kind = std::nullopt);

/// b = Ax + s, c = -A'y; with s = Pi(r) and y = s - r the witness
/// satisfies the optimality conditions exactly (up to rounding).
ConeProgram make_feasible(SparseMatrix A, const ConeSpec& cones, const Vector& x,
                          const Vector& s, const Vector& y);

/// Per column, cancels A'y against the first stored entry with y_i != 0
/// (columns whose support misses supp(y) already have (A'y)_j = 0);
/// then b = -y/||y||^2 and c uniform in [-1, 1].
ConeProgram make_infeasible(SparseMatrix A, const ConeSpec& cones, const Vector& y,
                            Rng& rng);

/// Per row, cancels (Ax + s) against the first stored entry in column
/// order, inserting an entry in column 0 for empty rows; zero entries of
/// x are set to 1 first (x is adjusted in place and remains the
/// witness); then c = -x/||x||^2 and b uniform in [-1, 1].
ConeProgram make_unbounded(SparseMatrix A, const ConeSpec& cones, Vector& x,
                           const Vector& s, Rng& rng);

/// Embeds the instance's witness into R^{m+n+1}.
Vector embed_witness(const GeneratedInstance& instance);

/// Classification wrapping the witness vectors, for residual checks.
Classification witness_classification(const GeneratedInstance& instance);

/// z + noise * ||z|| * g/||g|| with g standard normal; the perturbation
/// has relative norm exactly `noise`.
Vector perturb_relative(const Vector& z, double noise, Rng& rng);

}  // namespace cone_refine
