#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cone_refine/problems.hpp"
#include "cone_refine/refine.hpp"

namespace cone_refine {

// Exit codes: 0 success/pass, 1 check-fail, 2 usage/parse error.

struct RefineCmdOptions {
  std::string problem_path;
  std::string solution_path;
  std::string out_path;  // refined solution + report; empty to skip writing
  RefinementConfig config;
};

struct GenerateCmdOptions {
  std::uint64_t seed = 0;
  std::optional<InstanceKind> kind;
  std::string profile = "paper";
  std::string out_path;
  std::string witness_path;  // defaults to out_path with a .witness.json suffix
};

struct CheckCmdOptions {
  std::string problem_path;
  std::string solution_path;
  double tol = 1e-8;
};

struct ExperimentCmdOptions {
  int count = 1;
  std::uint64_t seed = 0;
  double noise = 1e-3;
  std::string csv_path;
  std::string profile = "paper";
  RefinementConfig config;
};

int cmd_refine(const RefineCmdOptions& opts);
int cmd_generate(const GenerateCmdOptions& opts);
int cmd_check(const CheckCmdOptions& opts);
int cmd_experiment(const ExperimentCmdOptions& opts);

/// Header of the experiment CSV, fixed.
extern const char* const kExperimentCsvHeader;

}  // namespace cone_refine
