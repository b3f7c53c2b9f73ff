#include <CLI11.hpp>

#include "cone_refine/cli.hpp"

namespace {

void add_refinement_flags(CLI::App* cmd, cone_refine::RefinementConfig* config) {
  cmd->add_option("--lsqr-iters", config->lsqr_iters, "LSQR iterations per step")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", config->lambda, "Levenberg-Marquardt regularization")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--refine-iters", config->refine_iters, "refinement steps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-backtracks", config->max_backtracks,
                  "maximum line-search backtracking steps")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", config->verbose, "per-step progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free refinement of approximate conic program solutions"};
  app.require_subcommand(1);

  cone_refine::RefineCmdOptions refine_opts;
  auto* refine_cmd = app.add_subcommand("refine", "refine an approximate solution");
  refine_cmd->add_option("problem", refine_opts.problem_path, "problem JSON file")
      ->required();
  refine_cmd->add_option("solution", refine_opts.solution_path, "solution JSON file")
      ->required();
  refine_cmd->add_option("--out", refine_opts.out_path,
                         "write refined solution and report JSON here");
  add_refinement_flags(refine_cmd, &refine_opts.config);

  cone_refine::GenerateCmdOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("generate", "generate a random problem instance");
  gen_cmd->add_option("--seed", gen_opts.seed, "generator seed")->required();
  gen_cmd->add_option("--out", gen_opts.out_path, "problem JSON output path")->required();
  gen_cmd->add_option("--witness", gen_opts.witness_path,
                      "witness solution output path (default: <out>.witness.json)");
  gen_cmd->add_option("--profile", gen_opts.profile, "size profile: tiny or paper")
      ->check(CLI::IsMember({"tiny", "paper"}));
  std::string kind_name;
  gen_cmd->add_option("--kind", kind_name, "force instance kind")
      ->check(CLI::IsMember({"feasible", "infeasible", "unbounded"}));

  cone_refine::CheckCmdOptions check_opts;
  auto* check_cmd =
      app.add_subcommand("check", "check optimality or certificate residuals");
  check_cmd->add_option("problem", check_opts.problem_path, "problem JSON file")
      ->required();
  check_cmd->add_option("solution", check_opts.solution_path, "solution JSON file")
      ->required();
  check_cmd->add_option("--tol", check_opts.tol, "pass/fail residual tolerance");

  cone_refine::ExperimentCmdOptions exp_opts;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "generate, perturb, and refine a batch of instances");
  exp_cmd->add_option("--count", exp_opts.count, "number of instances")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", exp_opts.seed, "first seed");
  exp_cmd->add_option("--noise", exp_opts.noise, "relative perturbation of the witness");
  exp_cmd->add_option("--csv", exp_opts.csv_path, "CSV output path");
  exp_cmd->add_option("--profile", exp_opts.profile, "size profile: tiny or paper")
      ->check(CLI::IsMember({"tiny", "paper"}));
  add_refinement_flags(exp_cmd, &exp_opts.config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (refine_cmd->parsed()) return cone_refine::cmd_refine(refine_opts);
  if (gen_cmd->parsed()) {
    if (kind_name == "feasible") gen_opts.kind = cone_refine::InstanceKind::Feasible;
    if (kind_name == "infeasible") gen_opts.kind = cone_refine::InstanceKind::Infeasible;
    if (kind_name == "unbounded") gen_opts.kind = cone_refine::InstanceKind::Unbounded;
    return cone_refine::cmd_generate(gen_opts);
  }
  if (check_cmd->parsed()) return cone_refine::cmd_check(check_opts);
  if (exp_cmd->parsed()) return cone_refine::cmd_experiment(exp_opts);
  return 2;
}
