#include "cone_refine/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>
#include <vector>

#include "cone_refine/io.hpp"
#include "cone_refine/kkt.hpp"

namespace cone_refine {

const char* const kExperimentCsvHeader =
    "seed,kind,m,n,resid_before,resid_after,factor,time_ms";

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int thread_budget(int count) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("CONE_REFINE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  return std::min(threads, count);
}

void print_kkt_report(const KktReport& report) {
  for (const auto& g : report.groups) {
    std::printf("  %-22s norm2 %.6e  norm_inf %.6e\n", g.name.c_str(), g.norm2,
                g.norm_inf);
  }
}

}  // namespace

int cmd_refine(const RefineCmdOptions& opts) {
  try {
    const ConeProgram program = read_problem(opts.problem_path);
    const SolutionData solution = read_solution(opts.solution_path);
    const Vector z0 = solution_to_embedded_point(solution, program);

    const Embedding emb(program);
    const auto [z, report] = refine(emb, z0, opts.config);
    const Classification cls = recover(emb, z);

    std::printf("initial |N(z)|: %.6e\n", report.initial_residual_norm);
    std::printf("final   |N(z)|: %.6e\n", report.final_residual_norm);
    std::printf("refinement factor: %.6e%s\n", report.refinement_factor,
                report.short_circuited ? " (short-circuited: already at solution)" : "");
    std::printf("classification: %s\n", solution_kind_name(cls.kind));

    if (!opts.out_path.empty()) {
      write_refined_solution(opts.out_path, z, cls, report);
    }
    return 0;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int cmd_generate(const GenerateCmdOptions& opts) {
  try {
    const auto profile = SizeProfile::by_name(opts.profile);
    if (!profile.has_value()) {
      std::fprintf(stderr, "error: unknown profile '%s' (expected tiny or paper)\n",
                   opts.profile.c_str());
      return 2;
    }
    const GeneratedInstance instance = generate(opts.seed, *profile, opts.kind);

    write_problem(opts.out_path, instance.program);
    std::string witness_path = opts.witness_path;
    if (witness_path.empty()) {
      witness_path = opts.out_path;
      const auto dot = witness_path.rfind(".json");
      if (dot != std::string::npos && dot == witness_path.size() - 5) {
        witness_path.resize(dot);
      }
      witness_path += ".witness.json";
    }
    SolutionData witness;
    witness.kind = instance_to_solution_kind(instance.kind);
    if (instance.x.size() > 0) witness.x = instance.x;
    if (instance.y.size() > 0) witness.y = instance.y;
    if (instance.s.size() > 0) witness.s = instance.s;
    write_solution(witness_path, witness);

    std::printf("seed %llu: %s instance, m = %d, n = %d, nnz(A) = %d\n",
                static_cast<unsigned long long>(opts.seed),
                instance_kind_name(instance.kind), instance.program.m(),
                instance.program.n(), instance.program.A.nnz());
    std::printf("problem: %s\nwitness: %s\n", opts.out_path.c_str(),
                witness_path.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int cmd_check(const CheckCmdOptions& opts) {
  try {
    const ConeProgram program = read_problem(opts.problem_path);
    const SolutionData solution = read_solution(opts.solution_path);
    const Vector z = solution_to_embedded_point(solution, program);
    const Embedding emb(program);

    Classification cls;
    if (solution.z.has_value()) {
      cls = recover(emb, z, opts.tol);
    } else {
      cls.kind = *solution.kind;
      cls.x = solution.x.value_or(Vector());
      cls.y = solution.y.value_or(Vector());
      cls.s = solution.s.value_or(Vector());
      cls.residuals = kkt_residuals(program, cls);
    }

    const double nnorm = normalized_residual_norm(emb, z);
    std::printf("classification: %s\n", solution_kind_name(cls.kind));
    double max_residual = nnorm;
    if (cls.residuals.has_value()) {
      print_kkt_report(*cls.residuals);
      max_residual = std::max(max_residual, cls.residuals->max_norm2());
    } else {
      std::printf("  (indeterminate: no conditions to check)\n");
      max_residual = std::numeric_limits<double>::infinity();
    }
    std::printf("  %-22s %.6e\n", "|N(z)|", nnorm);

    const bool pass = max_residual <= opts.tol;
    std::printf("%s (max residual %.6e, tol %.2e)\n", pass ? "PASS" : "FAIL",
                max_residual, opts.tol);
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

namespace {

struct ExperimentRow {
  std::uint64_t seed = 0;
  InstanceKind kind = InstanceKind::Feasible;
  int m = 0, n = 0;
  double resid_before = 0.0, resid_after = 0.0, factor = 1.0, time_ms = 0.0;
};

ExperimentRow run_experiment_instance(std::uint64_t seed, const SizeProfile& profile,
                                      double noise, const RefinementConfig& config) {
  const GeneratedInstance instance = generate(seed, profile);
  const Vector z_exact = embed_witness(instance);
  Rng noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Vector z0 = perturb_relative(z_exact, noise, noise_rng);

  const Embedding emb(instance.program);
  const auto [z, report] = refine(emb, z0, config);

  ExperimentRow row;
  row.seed = seed;
  row.kind = instance.kind;
  row.m = instance.program.m();
  row.n = instance.program.n();
  row.resid_before = report.initial_residual_norm;
  row.resid_after = report.final_residual_norm;
  row.factor = report.refinement_factor;
  row.time_ms = report.wall_time_ms;
  return row;
}

}  // namespace

int cmd_experiment(const ExperimentCmdOptions& opts) {
  try {
    if (opts.count < 1) {
      std::fprintf(stderr, "error: --count must be >= 1\n");
      return 2;
    }
    const auto profile = SizeProfile::by_name(opts.profile);
    if (!profile.has_value()) {
      std::fprintf(stderr, "error: unknown profile '%s' (expected tiny or paper)\n",
                   opts.profile.c_str());
      return 2;
    }

    std::vector<ExperimentRow> rows(opts.count);
    std::atomic<int> next{0};
    const int threads = thread_budget(opts.count);
    auto worker = [&]() {
      for (int i = next.fetch_add(1); i < opts.count; i = next.fetch_add(1)) {
        rows[i] = run_experiment_instance(opts.seed + static_cast<std::uint64_t>(i),
                                          *profile, opts.noise, opts.config);
      }
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // rows are written in seed order regardless of scheduling
    std::ofstream csv;
    std::ostream* out = nullptr;
    if (!opts.csv_path.empty()) {
      csv.open(opts.csv_path);
      if (!csv) {
        std::fprintf(stderr, "error: %s: cannot open file for writing\n",
                     opts.csv_path.c_str());
        return 2;
      }
      out = &csv;
    }
    double log_factor_sum = 0.0;
    if (out) *out << kExperimentCsvHeader << "\n";
    for (const auto& row : rows) {
      log_factor_sum += std::log(row.factor);
      if (out) {
        *out << row.seed << "," << instance_kind_name(row.kind) << "," << row.m << ","
             << row.n << "," << format_double(row.resid_before) << ","
             << format_double(row.resid_after) << "," << format_double(row.factor)
             << "," << format_double(row.time_ms) << "\n";
      }
    }
    const double geomean = std::exp(log_factor_sum / opts.count);
    std::printf("instances: %d\n", opts.count);
    std::printf("geometric-mean refinement factor: %.6e\n", geomean);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace cone_refine
