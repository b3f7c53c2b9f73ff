#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cone_refine/program.hpp"

namespace cone_refine {

struct Classification;

/// One residual group of the optimality (or certificate) conditions.
struct ResidualGroup {
  std::string name;
  double norm2 = 0.0;
  double norm_inf = 0.0;
};

struct KktReport {
  std::vector<ResidualGroup> groups;

  double max_norm2() const {
    double m = 0.0;
    for (const auto& g : groups) m = std::max(m, g.norm2);
    return m;
  }
};

/// Residuals of the condition group matching the classification kind:
/// equation residuals, complementarity, and cone-membership distances
/// ||v - Pi(v)||. Empty for Indeterminate (nothing to check).
std::optional<KktReport> kkt_residuals(const ConeProgram& program,
                                       const Classification& classification);

}  // namespace cone_refine
