#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cone_refine/kkt.hpp"
#include "cone_refine/problems.hpp"
#include "test_util.hpp"

using namespace cone_refine;

namespace {

double witness_max_residual(const GeneratedInstance& inst) {
  const auto report = kkt_residuals(inst.program, witness_classification(inst));
  REQUIRE(report.has_value());
  return report->max_norm2();
}

double witness_scale(const GeneratedInstance& inst) {
  return std::max({1.0, inst.x.size() ? inst.x.norm() : 0.0,
                   inst.y.size() ? inst.y.norm() : 0.0,
                   inst.s.size() ? inst.s.norm() : 0.0, inst.program.b.norm(),
                   inst.program.c.norm()});
}

}  // namespace

TEST_CASE("generation is deterministic") {
  const GeneratedInstance a = generate(1234, SizeProfile::tiny());
  const GeneratedInstance b = generate(1234, SizeProfile::tiny());
  CHECK(a.kind == b.kind);
  CHECK(a.program.A.vals == b.program.A.vals);
  CHECK(a.program.A.rowidx == b.program.A.rowidx);
  CHECK(a.program.b == b.program.b);
  CHECK(a.program.c == b.program.c);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.s == b.s);
}

TEST_CASE("generated instances satisfy their witness conditions") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GeneratedInstance inst = generate(seed, SizeProfile::tiny());
    CHECK_NOTHROW(inst.program.validate());
    CHECK(witness_max_residual(inst) <= 1e-9 * witness_scale(inst));

    const Vector z = embed_witness(inst);
    const Embedding emb(inst.program);
    CHECK(normalized_residual_norm(emb, z) <= 1e-9 * std::max(1.0, z.norm()));
  }
}

TEST_CASE("feasible instances have unit Frobenius norm") {
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GeneratedInstance inst = generate(seed, SizeProfile::tiny(),
                                            InstanceKind::Feasible);
    CHECK(std::abs(inst.program.A.frobenius_norm() - 1.0) <= 1e-12);
    ++seen;
  }
  CHECK(seen == 40);
}

TEST_CASE("infeasible construction") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GeneratedInstance inst =
        generate(seed, SizeProfile::tiny(), InstanceKind::Infeasible);
    REQUIRE(inst.kind == InstanceKind::Infeasible);
    CHECK(std::abs(inst.program.b.dot(inst.y) + 1.0) <= 1e-12);
    const Vector aty = spmv_t(inst.program.A, inst.y);
    CHECK(aty.cwiseAbs().maxCoeff() <= 1e-10 * witness_scale(inst));

    const Embedding emb(inst.program);
    CHECK(recover(emb, embed_witness(inst)).kind == SolutionKind::PrimalInfeasible);
  }
}

TEST_CASE("unbounded construction") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GeneratedInstance inst =
        generate(seed, SizeProfile::tiny(), InstanceKind::Unbounded);
    REQUIRE(inst.kind == InstanceKind::Unbounded);
    CHECK(std::abs(inst.program.c.dot(inst.x) + 1.0) <= 1e-12);
    const Vector r = spmv(inst.program.A, inst.x) + inst.s;
    CHECK(r.cwiseAbs().maxCoeff() <= 1e-10 * witness_scale(inst));
    CHECK_NOTHROW(inst.program.A.validate());  // row surgery keeps CSC valid

    const Embedding emb(inst.program);
    CHECK(recover(emb, embed_witness(inst)).kind == SolutionKind::DualInfeasible);
  }
}

TEST_CASE("kind frequencies follow the 0.8/0.1/0.1 draw") {
  const int total = 10000;
  int counts[3] = {0, 0, 0};
  for (int seed = 0; seed < total; ++seed) {
    counts[static_cast<int>(generate(seed, SizeProfile::tiny()).kind)]++;
  }
  // 3-sigma binomial bounds
  auto within = [&](int count, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) * total);
    return std::abs(count - p * total) <= 3.0 * sigma;
  };
  CHECK(within(counts[0], 0.8));
  CHECK(within(counts[1], 0.1));
  CHECK(within(counts[2], 0.1));
}

TEST_CASE("size profiles bound the drawn cone dimensions") {
  const SizeProfile tiny = SizeProfile::tiny();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ConeSpec& cones = generate(seed, tiny).program.cones;
    CHECK(cones.zero >= tiny.zero.lo);
    CHECK(cones.zero <= tiny.zero.hi);
    CHECK(cones.nonneg >= tiny.nonneg.lo);
    CHECK(cones.nonneg <= tiny.nonneg.hi);
    CHECK(static_cast<int>(cones.soc.size()) <= tiny.soc_count.hi);
    for (int q : cones.soc) {
      CHECK(q >= tiny.soc_size.lo);
      CHECK(q <= tiny.soc_size.hi);
    }
    for (int o : cones.psd) {
      CHECK(o >= tiny.psd_order.lo);
      CHECK(o <= tiny.psd_order.hi);
    }
  }
  // the default profile reproduces the reference experiment ranges
  const SizeProfile paper = SizeProfile::paper();
  CHECK(paper.zero.lo == 10);
  CHECK(paper.zero.hi == 50);
  CHECK(paper.nonneg.lo == 20);
  CHECK(paper.nonneg.hi == 100);
  CHECK(paper.soc_count.hi == 100);
  CHECK(paper.soc_size.lo == 5);
  CHECK(paper.psd_count.lo == 5);
  CHECK(paper.psd_order.hi == 10);
  CHECK(paper.exp_primal_count.lo == 2);
  CHECK(paper.exp_dual_count.hi == 10);

  const GeneratedInstance big = generate(0, paper);
  CHECK(big.program.m() >= big.program.n());
  CHECK(big.program.n() >= 1);
}

TEST_CASE("kkt_residuals tracks perturbation size") {
  const GeneratedInstance inst = generate(2, SizeProfile::tiny(),
                                          InstanceKind::Feasible);
  Classification cls = witness_classification(inst);
  Rng rng(77);
  for (int i = 0; i < cls.x.size(); ++i) cls.x[i] += 1e-3 * rng.uniform(-1.0, 1.0);
  const auto report = kkt_residuals(inst.program, cls);
  REQUIRE(report.has_value());
  CHECK(report->max_norm2() >= 1e-5);
  CHECK(report->max_norm2() <= 1e-1);

  Classification indet;
  CHECK_FALSE(kkt_residuals(inst.program, indet).has_value());
}

TEST_CASE("relative perturbation has the requested magnitude") {
  Rng rng(5);
  const Vector z = test_util::random_vector(rng, 40);
  Rng noise(6);
  const Vector zp = perturb_relative(z, 1e-3, noise);
  CHECK(std::abs((zp - z).norm() - 1e-3 * z.norm()) <= 1e-15 * z.norm());
  Rng noise0(6);
  CHECK((perturb_relative(z, 0.0, noise0) - z).norm() == 0.0);
}
