#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cone_refine/cli.hpp"
#include "cone_refine/io.hpp"
#include "test_util.hpp"

using namespace cone_refine;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cone_refine_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("problem file round trip is lossless") {
  TempDir tmp;
  const GeneratedInstance inst = generate(12, SizeProfile::tiny());
  const std::string path = tmp.file("prob.json");
  write_problem(path, inst.program);
  const ConeProgram back = read_problem(path);
  CHECK(back.A.vals == inst.program.A.vals);
  CHECK(back.A.rowidx == inst.program.A.rowidx);
  CHECK(back.A.colptr == inst.program.A.colptr);
  CHECK(back.b == inst.program.b);
  CHECK(back.c == inst.program.c);
  CHECK(back.cones.soc == inst.program.cones.soc);
  CHECK(back.cones.psd == inst.program.cones.psd);
}

TEST_CASE("solution file round trip") {
  TempDir tmp;
  Rng rng(3);
  SolutionData sol;
  sol.z = test_util::random_vector(rng, 7);
  const std::string path = tmp.file("sol.json");
  write_solution(path, sol);
  const SolutionData back = read_solution(path);
  REQUIRE(back.z.has_value());
  CHECK(*back.z == *sol.z);

  SolutionData witness;
  witness.kind = SolutionKind::PrimalInfeasible;
  witness.y = test_util::random_vector(rng, 4);
  write_solution(path, witness);
  const SolutionData wback = read_solution(path);
  REQUIRE(wback.kind == SolutionKind::PrimalInfeasible);
  CHECK(*wback.y == *witness.y);
  CHECK_FALSE(wback.x.has_value());
}

TEST_CASE("parse errors name the offending field") {
  TempDir tmp;
  const std::string path = tmp.file("bad.json");
  {
    std::ofstream out(path);
    out << "{\"n\": 1, \"m\": 1}";
  }
  CHECK_THROWS_WITH_AS(read_problem(path), doctest::Contains("missing field 'A'"),
                       IoError);
  {
    std::ofstream out(path);
    out << "{\"kind\": \"optimal\", \"x\": [1], \"y\": [\"oops\"], \"s\": [0]}";
  }
  CHECK_THROWS_WITH_AS(read_solution(path), doctest::Contains("'y'"), IoError);
  {
    std::ofstream out(path);
    out << "not json";
  }
  CHECK_THROWS_WITH_AS(read_problem(path), doctest::Contains("invalid JSON"), IoError);
  CHECK_THROWS_AS(read_problem(tmp.file("missing.json")), IoError);
}

TEST_CASE("generate + check commands") {
  TempDir tmp;
  GenerateCmdOptions gen;
  gen.seed = 5;
  gen.profile = "tiny";
  gen.out_path = tmp.file("p.json");
  CHECK(cmd_generate(gen) == 0);
  CHECK(fs::exists(tmp.file("p.witness.json")));

  CheckCmdOptions check;
  check.problem_path = gen.out_path;
  check.solution_path = tmp.file("p.witness.json");
  CHECK(cmd_check(check) == 0);

  // determinism: regenerating produces byte-identical files
  GenerateCmdOptions gen2 = gen;
  gen2.out_path = tmp.file("p2.json");
  gen2.witness_path = tmp.file("w2.json");
  CHECK(cmd_generate(gen2) == 0);
  CHECK(slurp(gen.out_path) == slurp(gen2.out_path));
  CHECK(slurp(tmp.file("p.witness.json")) == slurp(tmp.file("w2.json")));

  // unknown profile is a usage error
  gen2.profile = "huge";
  CHECK(cmd_generate(gen2) == 2);
}

TEST_CASE("certificate witness files round trip through generate and check") {
  TempDir tmp;
  for (const char* kind : {"infeasible", "unbounded"}) {
    GenerateCmdOptions gen;
    gen.seed = 33;
    gen.profile = "tiny";
    gen.out_path = tmp.file(std::string(kind) + ".json");
    gen.kind = std::string(kind) == "infeasible" ? InstanceKind::Infeasible
                                                 : InstanceKind::Unbounded;
    REQUIRE(cmd_generate(gen) == 0);
    const std::string witness = tmp.file(std::string(kind) + ".witness.json");
    const SolutionData sol = read_solution(witness);
    REQUIRE(sol.kind.has_value());
    CHECK(*sol.kind == (gen.kind == InstanceKind::Infeasible
                            ? SolutionKind::PrimalInfeasible
                            : SolutionKind::DualInfeasible));
    CheckCmdOptions check;
    check.problem_path = gen.out_path;
    check.solution_path = witness;
    CHECK(cmd_check(check) == 0);

    // certificate files refine through the embedding path as well
    RefineCmdOptions ref;
    ref.problem_path = gen.out_path;
    ref.solution_path = witness;
    ref.out_path = tmp.file(std::string(kind) + ".refined.json");
    CHECK(cmd_refine(ref) == 0);
    const json out = json::parse(slurp(ref.out_path));
    CHECK(out["report"]["short_circuited"].get<bool>());  // witness is exact
  }
}

TEST_CASE("refine accepts a solution file in (x, y, s) form") {
  TempDir tmp;
  GenerateCmdOptions gen;
  gen.seed = 44;
  gen.profile = "tiny";
  gen.kind = InstanceKind::Feasible;
  gen.out_path = tmp.file("p.json");
  REQUIRE(cmd_generate(gen) == 0);

  // perturb the witness vectors themselves and refine from the xys form
  const GeneratedInstance inst = generate(44, SizeProfile::tiny(),
                                          InstanceKind::Feasible);
  Rng rng(13);
  SolutionData noisy;
  noisy.kind = SolutionKind::Optimal;
  noisy.x = perturb_relative(inst.x, 1e-3, rng);
  noisy.y = perturb_relative(inst.y, 1e-3, rng);
  noisy.s = perturb_relative(inst.s, 1e-3, rng);
  write_solution(tmp.file("noisy.json"), noisy);

  RefineCmdOptions ref;
  ref.problem_path = gen.out_path;
  ref.solution_path = tmp.file("noisy.json");
  ref.out_path = tmp.file("refined.json");
  CHECK(cmd_refine(ref) == 0);
  const json out = json::parse(slurp(ref.out_path));
  CHECK(out["report"]["final_residual_norm"].get<double>() <
        out["report"]["initial_residual_norm"].get<double>());
  CHECK(out["kind"] == "optimal");
}

TEST_CASE("check fails on a perturbed witness and missing files") {
  TempDir tmp;
  GenerateCmdOptions gen;
  gen.seed = 8;
  gen.profile = "tiny";
  gen.out_path = tmp.file("p.json");
  REQUIRE(cmd_generate(gen) == 0);

  const GeneratedInstance inst = generate(8, SizeProfile::tiny());
  Rng rng(99);
  SolutionData noisy;
  noisy.z = perturb_relative(embed_witness(inst), 1e-3, rng);
  write_solution(tmp.file("noisy.json"), noisy);

  CheckCmdOptions check;
  check.problem_path = gen.out_path;
  check.solution_path = tmp.file("noisy.json");
  CHECK(cmd_check(check) == 1);
  check.tol = 1.0;
  CHECK(cmd_check(check) == 0);

  check.solution_path = tmp.file("nope.json");
  CHECK(cmd_check(check) == 2);
}

TEST_CASE("refine command end to end") {
  TempDir tmp;
  GenerateCmdOptions gen;
  gen.seed = 21;
  gen.profile = "tiny";
  gen.out_path = tmp.file("p.json");
  REQUIRE(cmd_generate(gen) == 0);

  const GeneratedInstance inst = generate(21, SizeProfile::tiny());
  Rng rng(7);
  SolutionData noisy;
  noisy.z = perturb_relative(embed_witness(inst), 1e-3, rng);
  write_solution(tmp.file("noisy.json"), noisy);

  RefineCmdOptions ref;
  ref.problem_path = gen.out_path;
  ref.solution_path = tmp.file("noisy.json");
  ref.out_path = tmp.file("refined.json");
  CHECK(cmd_refine(ref) == 0);

  const json refined = json::parse(slurp(ref.out_path));
  REQUIRE(refined.contains("report"));
  const double before = refined["report"]["initial_residual_norm"].get<double>();
  const double after = refined["report"]["final_residual_norm"].get<double>();
  CHECK(after < before);
  CHECK(refined["report"]["refinement_factor"].get<double>() > 10.0);
  double prev = before;
  for (const auto& step : refined["report"]["steps"]) {
    CHECK(step["residual_after"].get<double>() <= prev);
    prev = step["residual_after"].get<double>();
  }
  CHECK(refined.contains("z"));
  CHECK(refined.contains("kind"));

  // the refined file itself passes a check at a loose tolerance
  CheckCmdOptions check;
  check.problem_path = gen.out_path;
  check.solution_path = ref.out_path;
  check.tol = 1e-4;
  CHECK(cmd_check(check) == 0);

  // refining the exact witness short-circuits with factor 1
  ref.solution_path = tmp.file("p.witness.json");
  ref.out_path = tmp.file("refined_exact.json");
  CHECK(cmd_refine(ref) == 0);
  const json exact = json::parse(slurp(ref.out_path));
  CHECK(exact["report"]["short_circuited"].get<bool>());
  CHECK(exact["report"]["refinement_factor"].get<double>() == 1.0);

  // malformed solution file is a parse error
  {
    std::ofstream out(tmp.file("broken.json"));
    out << "{\"z\": \"nope\"}";
  }
  ref.solution_path = tmp.file("broken.json");
  CHECK(cmd_refine(ref) == 2);
}

TEST_CASE("experiment command writes a deterministic CSV") {
  TempDir tmp;
  ExperimentCmdOptions exp;
  exp.count = 4;
  exp.seed = 100;
  exp.profile = "tiny";
  exp.csv_path = tmp.file("out.csv");
  CHECK(cmd_experiment(exp) == 0);

  std::ifstream csv(exp.csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header == kExperimentCsvHeader);
  int rows = 0;
  std::string line;
  std::vector<std::string> first_run;
  while (std::getline(csv, line)) {
    first_run.push_back(line);
    ++rows;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 8);
    CHECK(std::stod(fields[6]) >= 1.0);  // factor
  }
  CHECK(rows == 4);

  exp.csv_path = tmp.file("out2.csv");
  CHECK(cmd_experiment(exp) == 0);
  std::ifstream csv2(exp.csv_path);
  std::getline(csv2, line);
  int i = 0;
  while (std::getline(csv2, line)) {
    // identical rows except the wall-clock column
    const auto strip_time = [](const std::string& row) {
      return row.substr(0, row.rfind(','));
    };
    CHECK(strip_time(line) == strip_time(first_run[i]));
    ++i;
  }
  CHECK(i == 4);

  exp.count = 0;
  CHECK(cmd_experiment(exp) == 2);
}
