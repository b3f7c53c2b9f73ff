#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cone_refine/embedding.hpp"
#include "cone_refine/program.hpp"
#include "cone_refine/refine.hpp"

namespace cone_refine {

/// Parse or validation failure; the message names the offending file and
/// field.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either an embedded point z or a solution/certificate in (x, y, s,
/// kind) form, as read from a solution file.
struct SolutionData {
  std::optional<Vector> z;
  std::optional<SolutionKind> kind;
  std::optional<Vector> x, y, s;
};

ConeProgram read_problem(const std::string& path);
void write_problem(const std::string& path, const ConeProgram& program);

SolutionData read_solution(const std::string& path);
void write_solution(const std::string& path, const SolutionData& solution);

/// Validates the solution against the program's dimensions and returns
/// the embedded point (embedding (x, y, s) form if no z is given).
Vector solution_to_embedded_point(const SolutionData& solution, const ConeProgram& program);

/// Refined solution file carrying z, the recovered form, and the
/// refinement report.
void write_refined_solution(const std::string& path, const Vector& z,
                            const Classification& cls, const RefinementReport& report);

}  // namespace cone_refine
