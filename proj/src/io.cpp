#include "cone_refine/io.hpp"

#include <fstream>

#include <json.hpp>

namespace cone_refine {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(path + ": cannot open file");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": invalid JSON: " + e.what());
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw IoError(where + ": missing field '" + key + "'");
  }
  return *it;
}

int get_int(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) {
    throw IoError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::vector<int> get_int_vector(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array()) {
    throw IoError(where + ": field '" + key + "' must be an array");
  }
  std::vector<int> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number_integer()) {
      throw IoError(where + ": field '" + key + "' must contain integers");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

Vector get_vector(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array()) {
    throw IoError(where + ": field '" + key + "' must be an array");
  }
  Vector out(v.size());
  int i = 0;
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw IoError(where + ": field '" + key + "' must contain numbers");
    }
    out[i++] = e.get<double>();
  }
  return out;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw IoError(path + ": cannot open file for writing");
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw IoError(path + ": write failed");
  }
}

std::optional<SolutionKind> parse_kind(const std::string& name) {
  if (name == "optimal") return SolutionKind::Optimal;
  if (name == "primal_infeasible") return SolutionKind::PrimalInfeasible;
  if (name == "dual_infeasible") return SolutionKind::DualInfeasible;
  return std::nullopt;
}

}  // namespace

ConeProgram read_problem(const std::string& path) {
  const json j = parse_file(path);
  ConeProgram p;
  const int n = get_int(j, "n", path);
  const int m = get_int(j, "m", path);

  const json& ja = require(j, "A", path);
  const std::string apath = path + ": A";
  p.A.rows = get_int(ja, "m", apath);
  p.A.cols = get_int(ja, "n", apath);
  p.A.colptr = get_int_vector(ja, "colptr", apath);
  p.A.rowidx = get_int_vector(ja, "rowidx", apath);
  const Vector vals = get_vector(ja, "vals", apath);
  p.A.vals.assign(vals.data(), vals.data() + vals.size());
  if (p.A.rows != m || p.A.cols != n) {
    throw IoError(path + ": A dimensions disagree with top-level n, m");
  }

  p.b = get_vector(j, "b", path);
  p.c = get_vector(j, "c", path);

  const json& jc = require(j, "cones", path);
  const std::string cpath = path + ": cones";
  p.cones.zero = get_int(jc, "z", cpath);
  p.cones.nonneg = get_int(jc, "l", cpath);
  p.cones.soc = get_int_vector(jc, "q", cpath);
  p.cones.psd = get_int_vector(jc, "s", cpath);
  p.cones.exp_primal = get_int(jc, "ep", cpath);
  p.cones.exp_dual = get_int(jc, "ed", cpath);

  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ": " + e.what());
  }
  return p;
}

void write_problem(const std::string& path, const ConeProgram& program) {
  json j;
  j["n"] = program.n();
  j["m"] = program.m();
  j["A"] = {{"m", program.A.rows},
            {"n", program.A.cols},
            {"colptr", program.A.colptr},
            {"rowidx", program.A.rowidx},
            {"vals", program.A.vals}};
  j["b"] = to_json(program.b);
  j["c"] = to_json(program.c);
  j["cones"] = {{"z", program.cones.zero}, {"l", program.cones.nonneg},
                {"q", program.cones.soc},  {"s", program.cones.psd},
                {"ep", program.cones.exp_primal}, {"ed", program.cones.exp_dual}};
  write_file(path, j);
}

SolutionData read_solution(const std::string& path) {
  const json j = parse_file(path);
  SolutionData sol;
  if (j.contains("z")) {
    sol.z = get_vector(j, "z", path);
    return sol;
  }
  const json& jk = require(j, "kind", path);
  if (!jk.is_string()) {
    throw IoError(path + ": field 'kind' must be a string");
  }
  sol.kind = parse_kind(jk.get<std::string>());
  if (!sol.kind.has_value()) {
    throw IoError(path + ": field 'kind' must be one of optimal, primal_infeasible, "
                         "dual_infeasible");
  }
  switch (*sol.kind) {
    case SolutionKind::Optimal:
      sol.x = get_vector(j, "x", path);
      sol.y = get_vector(j, "y", path);
      sol.s = get_vector(j, "s", path);
      break;
    case SolutionKind::PrimalInfeasible:
      sol.y = get_vector(j, "y", path);
      break;
    case SolutionKind::DualInfeasible:
      sol.x = get_vector(j, "x", path);
      sol.s = get_vector(j, "s", path);
      break;
    default:
      break;
  }
  return sol;
}

void write_solution(const std::string& path, const SolutionData& solution) {
  json j;
  if (solution.z.has_value()) j["z"] = to_json(*solution.z);
  if (solution.kind.has_value()) j["kind"] = solution_kind_name(*solution.kind);
  if (solution.x.has_value()) j["x"] = to_json(*solution.x);
  if (solution.y.has_value()) j["y"] = to_json(*solution.y);
  if (solution.s.has_value()) j["s"] = to_json(*solution.s);
  write_file(path, j);
}

Vector solution_to_embedded_point(const SolutionData& solution,
                                  const ConeProgram& program) {
  const int n = program.n(), m = program.m();
  if (solution.z.has_value()) {
    if (solution.z->size() != m + n + 1) {
      throw IoError("solution: z has length " + std::to_string(solution.z->size()) +
                    ", expected m+n+1 = " + std::to_string(m + n + 1));
    }
    if ((*solution.z)[m + n] == 0.0) {
      throw IoError("solution: z has zero last coordinate (w = 0)");
    }
    return *solution.z;
  }
  if (!solution.kind.has_value()) {
    throw IoError("solution: needs either 'z' or a 'kind' with witness vectors");
  }
  try {
    return embed_solution(program, *solution.kind, solution.x.value_or(Vector()),
                          solution.y.value_or(Vector()), solution.s.value_or(Vector()));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("solution: ") + e.what());
  }
}

namespace {

json report_to_json(const RefinementReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"residual_before", s.residual_before},
                     {"residual_after", s.residual_after},
                     {"step_size", s.step_size},
                     {"backtracks", s.backtracks},
                     {"lsqr_iterations", s.lsqr_iterations},
                     {"failed", s.failed}});
  }
  return {{"initial_residual_norm", report.initial_residual_norm},
          {"final_residual_norm", report.final_residual_norm},
          {"refinement_factor", report.refinement_factor},
          {"wall_time_ms", report.wall_time_ms},
          {"short_circuited", report.short_circuited},
          {"steps", steps}};
}

}  // namespace

void write_refined_solution(const std::string& path, const Vector& z,
                            const Classification& cls, const RefinementReport& report) {
  json j;
  j["z"] = to_json(z);
  j["kind"] = solution_kind_name(cls.kind);
  if (cls.kind == SolutionKind::Optimal || cls.kind == SolutionKind::DualInfeasible) {
    j["x"] = to_json(cls.x);
    j["s"] = to_json(cls.s);
  }
  if (cls.kind == SolutionKind::Optimal || cls.kind == SolutionKind::PrimalInfeasible) {
    j["y"] = to_json(cls.y);
  }
  if (cls.residuals.has_value()) {
    json groups = json::array();
    for (const auto& g : cls.residuals->groups) {
      groups.push_back({{"name", g.name}, {"norm2", g.norm2}, {"norm_inf", g.norm_inf}});
    }
    j["kkt_residuals"] = groups;
  }
  j["report"] = report_to_json(report);
  write_file(path, j);
}

}  // namespace cone_refine
