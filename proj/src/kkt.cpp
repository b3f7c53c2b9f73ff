#include "cone_refine/kkt.hpp"

#include <cmath>

#include "cone_refine/embedding.hpp"

namespace cone_refine {

namespace {

ResidualGroup vector_group(std::string name, const Vector& r) {
  return {std::move(name), r.norm(), r.size() > 0 ? r.cwiseAbs().maxCoeff() : 0.0};
}

ResidualGroup scalar_group(std::string name, double r) {
  return {std::move(name), std::abs(r), std::abs(r)};
}

double cone_distance(const ConeSpec& spec, const Vector& v) {
  return (v - project_product(spec, v)).norm();
}

double dual_cone_distance(const ConeSpec& spec, const Vector& v) {
  return (v - project_product_dual(spec, v)).norm();
}

}  // namespace

std::optional<KktReport> kkt_residuals(const ConeProgram& program,
                                       const Classification& cls) {
  KktReport report;
  switch (cls.kind) {
    case SolutionKind::Optimal:
      report.groups.push_back(
          vector_group("primal_residual", spmv(program.A, cls.x) + cls.s - program.b));
      report.groups.push_back(
          vector_group("dual_residual", spmv_t(program.A, cls.y) + program.c));
      report.groups.push_back(scalar_group("duality_gap", cls.s.dot(cls.y)));
      report.groups.push_back(
          scalar_group("s_cone_distance", cone_distance(program.cones, cls.s)));
      report.groups.push_back(
          scalar_group("y_dual_cone_distance", dual_cone_distance(program.cones, cls.y)));
      return report;
    case SolutionKind::PrimalInfeasible:
      report.groups.push_back(vector_group("Aty", spmv_t(program.A, cls.y)));
      report.groups.push_back(scalar_group("bty_plus_one", program.b.dot(cls.y) + 1.0));
      report.groups.push_back(
          scalar_group("y_dual_cone_distance", dual_cone_distance(program.cones, cls.y)));
      return report;
    case SolutionKind::DualInfeasible:
      report.groups.push_back(
          vector_group("primal_residual", spmv(program.A, cls.x) + cls.s));
      report.groups.push_back(scalar_group("ctx_plus_one", program.c.dot(cls.x) + 1.0));
      report.groups.push_back(
          scalar_group("s_cone_distance", cone_distance(program.cones, cls.s)));
      return report;
    case SolutionKind::Indeterminate:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace cone_refine
