#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cone_refine/cones.hpp"
#include "cone_refine/embedding.hpp"
#include "cone_refine/kkt.hpp"
#include "cone_refine/lsqr.hpp"
#include "cone_refine/problems.hpp"
#include "cone_refine/program.hpp"
#include "cone_refine/refine.hpp"

namespace py = pybind11;
using namespace cone_refine;

PYBIND11_MODULE(cone_refine, m) {
  m.doc() = "Matrix-free refinement of approximate conic program solutions";

  py::class_<SparseMatrix>(m, "SparseMatrix")
      .def(py::init([](int rows, int cols, std::vector<int> colptr,
                       std::vector<int> rowidx, std::vector<double> vals) {
             SparseMatrix A{rows, cols, std::move(colptr), std::move(rowidx),
                            std::move(vals)};
             A.validate();
             return A;
           }),
           py::arg("rows"), py::arg("cols"), py::arg("colptr"), py::arg("rowidx"),
           py::arg("vals"))
      .def_readonly("rows", &SparseMatrix::rows)
      .def_readonly("cols", &SparseMatrix::cols)
      .def_readonly("colptr", &SparseMatrix::colptr)
      .def_readonly("rowidx", &SparseMatrix::rowidx)
      .def_readonly("vals", &SparseMatrix::vals)
      .def("to_dense", &SparseMatrix::to_dense);

  py::class_<ConeSpec>(m, "ConeSpec")
      .def(py::init([](int zero, int nonneg, std::vector<int> soc, std::vector<int> psd,
                       int exp_primal, int exp_dual) {
             ConeSpec spec{zero, nonneg, std::move(soc), std::move(psd), exp_primal,
                           exp_dual};
             spec.validate();
             return spec;
           }),
           py::arg("zero") = 0, py::arg("nonneg") = 0,
           py::arg("soc") = std::vector<int>{}, py::arg("psd") = std::vector<int>{},
           py::arg("exp_primal") = 0, py::arg("exp_dual") = 0)
      .def_readonly("zero", &ConeSpec::zero)
      .def_readonly("nonneg", &ConeSpec::nonneg)
      .def_readonly("soc", &ConeSpec::soc)
      .def_readonly("psd", &ConeSpec::psd)
      .def_readonly("exp_primal", &ConeSpec::exp_primal)
      .def_readonly("exp_dual", &ConeSpec::exp_dual)
      .def("total_dim", &ConeSpec::total_dim);

  py::class_<ConeProgram>(m, "ConeProgram")
      .def(py::init([](SparseMatrix A, Vector b, Vector c, ConeSpec cones) {
             ConeProgram p{std::move(A), std::move(b), std::move(c), std::move(cones)};
             p.validate();
             return p;
           }),
           py::arg("A"), py::arg("b"), py::arg("c"), py::arg("cones"))
      .def_property_readonly("n", &ConeProgram::n)
      .def_property_readonly("m", &ConeProgram::m)
      .def_readonly("A", &ConeProgram::A)
      .def_readonly("b", &ConeProgram::b)
      .def_readonly("c", &ConeProgram::c)
      .def_readonly("cones", &ConeProgram::cones);

  py::enum_<SolutionKind>(m, "SolutionKind")
      .value("Optimal", SolutionKind::Optimal)
      .value("PrimalInfeasible", SolutionKind::PrimalInfeasible)
      .value("DualInfeasible", SolutionKind::DualInfeasible)
      .value("Indeterminate", SolutionKind::Indeterminate);

  py::enum_<InstanceKind>(m, "InstanceKind")
      .value("Feasible", InstanceKind::Feasible)
      .value("Infeasible", InstanceKind::Infeasible)
      .value("Unbounded", InstanceKind::Unbounded);

  py::class_<Classification>(m, "Classification")
      .def_readonly("kind", &Classification::kind)
      .def_readonly("x", &Classification::x)
      .def_readonly("y", &Classification::y)
      .def_readonly("s", &Classification::s)
      .def_readonly("degenerate", &Classification::degenerate)
      .def_readonly("meets_tolerance", &Classification::meets_tolerance)
      .def_property_readonly("max_residual", [](const Classification& cls) {
        return cls.residuals.has_value() ? cls.residuals->max_norm2()
                                         : std::numeric_limits<double>::quiet_NaN();
      });

  py::class_<Embedding>(m, "Embedding")
      .def(py::init<const ConeProgram&>(), py::arg("program"),
           py::keep_alive<1, 2>())
      .def_property_readonly("n", &Embedding::n)
      .def_property_readonly("m", &Embedding::m)
      .def("total_dim", &Embedding::total_dim);

  py::class_<RefinementConfig>(m, "RefinementConfig")
      .def(py::init([](int lsqr_iters, double lambda, int max_backtracks,
                       int refine_iters, bool verbose) {
             RefinementConfig cfg{lsqr_iters, lambda, max_backtracks, refine_iters,
                                  verbose};
             cfg.validate();
             return cfg;
           }),
           py::arg("lsqr_iters") = 30, py::arg("lambda_") = 1e-8,
           py::arg("max_backtracks") = 10, py::arg("refine_iters") = 2,
           py::arg("verbose") = false)
      .def_readwrite("lsqr_iters", &RefinementConfig::lsqr_iters)
      .def_readwrite("lambda_", &RefinementConfig::lambda)
      .def_readwrite("max_backtracks", &RefinementConfig::max_backtracks)
      .def_readwrite("refine_iters", &RefinementConfig::refine_iters)
      .def_readwrite("verbose", &RefinementConfig::verbose);

  py::class_<RefineStepRecord>(m, "RefineStepRecord")
      .def_readonly("residual_before", &RefineStepRecord::residual_before)
      .def_readonly("residual_after", &RefineStepRecord::residual_after)
      .def_readonly("step_size", &RefineStepRecord::step_size)
      .def_readonly("backtracks", &RefineStepRecord::backtracks)
      .def_readonly("lsqr_iterations", &RefineStepRecord::lsqr_iterations)
      .def_readonly("failed", &RefineStepRecord::failed);

  py::class_<RefinementReport>(m, "RefinementReport")
      .def_readonly("steps", &RefinementReport::steps)
      .def_readonly("initial_residual_norm", &RefinementReport::initial_residual_norm)
      .def_readonly("final_residual_norm", &RefinementReport::final_residual_norm)
      .def_readonly("refinement_factor", &RefinementReport::refinement_factor)
      .def_readonly("wall_time_ms", &RefinementReport::wall_time_ms)
      .def_readonly("short_circuited", &RefinementReport::short_circuited);

  py::class_<GeneratedInstance>(m, "GeneratedInstance")
      .def_readonly("program", &GeneratedInstance::program)
      .def_readonly("kind", &GeneratedInstance::kind)
      .def_readonly("x", &GeneratedInstance::x)
      .def_readonly("y", &GeneratedInstance::y)
      .def_readonly("s", &GeneratedInstance::s)
      .def_readonly("seed", &GeneratedInstance::seed);

  m.def("project_product", &project_product, py::arg("cones"), py::arg("x"),
        "blockwise projection onto the product cone");
  m.def("project_product_dual", &project_product_dual, py::arg("cones"), py::arg("x"));
  m.def("d_project_product_apply", &d_project_product_apply, py::arg("cones"),
        py::arg("x"), py::arg("dx"), "Jacobian-vector product of the projection");

  m.def("residual", &residual, py::arg("embedding"), py::arg("z"));
  m.def("normalized_residual", &normalized_residual, py::arg("embedding"), py::arg("z"));
  m.def("normalized_residual_norm", &normalized_residual_norm, py::arg("embedding"),
        py::arg("z"));
  m.def("embed_solution", &embed_solution, py::arg("program"), py::arg("kind"),
        py::arg("x") = Vector(), py::arg("y") = Vector(), py::arg("s") = Vector());
  m.def("recover", &recover, py::arg("embedding"), py::arg("z"), py::arg("tol") = 1e-8);

  m.def(
      "refine",
      [](const Embedding& emb, const Vector& z0, const RefinementConfig& cfg) {
        return refine(emb, z0, cfg);
      },
      py::arg("embedding"), py::arg("z0"), py::arg("config") = RefinementConfig{},
      "returns (refined z, report)");

  m.def(
      "generate",
      [](std::uint64_t seed, const std::string& profile) {
        const auto p = SizeProfile::by_name(profile);
        if (!p.has_value()) {
          throw std::invalid_argument("generate: profile must be 'tiny' or 'paper'");
        }
        return generate(seed, *p);
      },
      py::arg("seed"), py::arg("profile") = "paper");
  m.def("embed_witness", &embed_witness, py::arg("instance"));
}
