#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cone_refine/cones.hpp"
#include "test_util.hpp"

using namespace cone_refine;
using test_util::fd_directional;
using test_util::random_vector;
using test_util::relative_error;
using test_util::sample_differentiable_point;

namespace {

const std::vector<PrimitiveCone> kAllCones = {
    PrimitiveCone::zero(3),         PrimitiveCone::free(3),
    PrimitiveCone::nonneg(6),       PrimitiveCone::second_order(2),
    PrimitiveCone::second_order(5), PrimitiveCone::psd(2),
    PrimitiveCone::psd(3),          PrimitiveCone::exp_primal(),
    PrimitiveCone::exp_dual()};

Eigen::Vector4d exp_kkt_at(const Eigen::Vector3d& p, double mu,
                           const Eigen::Vector3d& v) {
  const double e = std::exp(p[0] / p[1]);
  Eigen::Vector4d r;
  r[0] = p[0] - v[0] + mu * e;
  r[1] = p[1] - v[1] + mu * e * (1.0 - p[0] / p[1]);
  r[2] = p[2] - v[2] - mu;
  r[3] = p[1] * e - p[2];
  return r;
}

}  // namespace

TEST_CASE("projection examples") {
  // nonnegative: elementwise clamp
  Vector x(2);
  x << -1.5, 2.0;
  Vector p = project(PrimitiveCone::nonneg(2), x);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 2.0);

  // second-order cone, projection branch
  Vector soc(3);
  soc << 0.0, 3.0, 4.0;
  p = project(PrimitiveCone::second_order(3), soc);
  CHECK(p[0] == doctest::Approx(2.5));
  CHECK(p[1] == doctest::Approx(1.5));
  CHECK(p[2] == doctest::Approx(2.0));

  // PSD: eigenvalue clamp of diag(1, -2) in scaled-triangle form
  Matrix X = Matrix::Zero(2, 2);
  X(0, 0) = 1.0;
  X(1, 1) = -2.0;
  p = project(PrimitiveCone::psd(2), svec(X));
  Matrix P = smat(p);
  CHECK(P(0, 0) == doctest::Approx(1.0));
  CHECK(P(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(P(0, 1) == doctest::Approx(0.0).epsilon(1e-12));

  // exponential cone, third case
  Vector e(3);
  e << -1.0, -1.0, 1.0;
  p = project(PrimitiveCone::exp_primal(), e);
  CHECK(p[0] == -1.0);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 1.0);

  CHECK_THROWS_AS(project(PrimitiveCone::nonneg(2), Vector::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("exponential cone Newton case against KKT and brute force") {
  const Eigen::Vector3d v(1.0, 2.0, 1.0);
  const ExpProjectionResult res = project_exp_primal(v);
  CHECK(res.case_id == ExpCase::Newton);
  const double scale = std::max(1.0, v.norm());
  CHECK(exp_kkt_at(res.point, res.multiplier, v).norm() <= 1e-10 * scale);
  const Eigen::Vector3d oracle = test_util::exp_projection_bruteforce(v);
  CHECK((res.point - oracle).norm() <= 1e-6);

  // a few generic points, including ones projecting near the boundary ray
  Rng rng(5);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d w(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                            rng.uniform(-2.0, 2.0));
    const Vector got = project(PrimitiveCone::exp_primal(), Vector(w));
    const Eigen::Vector3d want = test_util::exp_projection_bruteforce(w);
    CHECK((Eigen::Vector3d(got) - want).norm() <= 1e-6);
  }
}

TEST_CASE("exp projection result invariants") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d v(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                            rng.uniform(-2.0, 2.0));
    const ExpProjectionResult res = project_exp_primal(v);
    const double scale = std::max(1.0, v.norm());
    // membership measured as distance to the cone (resp. its polar)
    const Vector pv(res.point);
    CHECK((project(PrimitiveCone::exp_primal(), pv) - pv).norm() <= 1e-9 * scale);
    const Eigen::Vector3d q = v - res.point;
    CHECK(project(PrimitiveCone::exp_primal(), Vector(q)).norm() <= 1e-9 * scale);
    CHECK(res.point.dot(q) <= 1e-9 * scale * scale);
    if (res.case_id == ExpCase::Newton && res.point[1] > 0.0) {
      CHECK(exp_kkt_at(res.point, res.multiplier, v).norm() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("dual projections") {
  // dual of the zero cone is everything
  Vector five = Vector::Constant(1, 5.0);
  CHECK(project_dual(PrimitiveCone::zero(1), five)[0] == 5.0);
  // nonnegative is self-dual
  CHECK(project_dual(PrimitiveCone::nonneg(1), Vector::Constant(1, -1.0))[0] == 0.0);
  // interior point of the dual exponential cone is fixed
  Vector ed(3);
  ed << -1.0, 0.0, 1.0;
  CHECK((project_dual(PrimitiveCone::exp_primal(), ed) - ed).norm() == 0.0);
  CHECK((project(PrimitiveCone::exp_dual(), ed) - ed).norm() == 0.0);

  // self-dual kinds: project_dual is exactly project
  Rng rng(2);
  for (const auto& cone : {PrimitiveCone::nonneg(4), PrimitiveCone::second_order(4),
                           PrimitiveCone::psd(3)}) {
    const Vector x = random_vector(rng, cone.dim());
    CHECK((project_dual(cone, x) - project(cone, x)).norm() == 0.0);
  }
}

TEST_CASE("derivative examples") {
  // nonneg diagonal
  Vector x(2), dx(2);
  x << 3.0, -2.0;
  dx << 1.0, 1.0;
  Vector d = d_project_apply(PrimitiveCone::nonneg(2), x, dx);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 0.0);

  // SOC third branch: first column of the derivative matrix
  Vector soc(3), e1(3);
  soc << 0.0, 3.0, 4.0;
  e1 << 1.0, 0.0, 0.0;
  d = d_project_apply(PrimitiveCone::second_order(3), soc, e1);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(0.3));
  CHECK(d[2] == doctest::Approx(0.4));
  const Vector fd = fd_directional(
      [&](const Vector& v) { return project(PrimitiveCone::second_order(3), v); }, soc,
      e1);
  CHECK(relative_error(d, fd) <= 1e-5);

  // PSD at diag(2, -1) along the off-diagonal direction: factor 2/3
  Matrix X = Matrix::Zero(2, 2);
  X(0, 0) = 2.0;
  X(1, 1) = -1.0;
  Matrix Xt(2, 2);
  Xt << 0.0, 1.0, 1.0, 0.0;
  d = d_project_apply(PrimitiveCone::psd(2), svec(X), svec(Xt));
  CHECK(relative_error(d, Vector((2.0 / 3.0) * svec(Xt))) <= 1e-12);

  // exp case 3 with z > 0
  Vector ep(3), dep(3);
  ep << -1.0, -1.0, 2.0;
  dep << 0.7, -0.3, 0.4;
  d = d_project_apply(PrimitiveCone::exp_primal(), ep, dep);
  CHECK(d[0] == doctest::Approx(0.7));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(0.4));

  // exp case 3 at z = 0: sign(0) := 0 gives a half step
  ep[2] = 0.0;
  d = d_project_apply(PrimitiveCone::exp_primal(), ep, dep);
  CHECK(d[2] == doctest::Approx(0.2));

  // nonneg at the kink uses slope 1/2
  Vector zero1 = Vector::Zero(1);
  CHECK(d_project_apply(PrimitiveCone::nonneg(1), zero1, Vector::Ones(1))[0] == 0.5);

  // SOC on the boundary ||x|| = t uses the projection-branch formula
  Vector bd(3);
  bd << 5.0, 3.0, 4.0;
  d = d_project_apply(PrimitiveCone::second_order(3), bd, e1);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(0.3));
  CHECK(d[2] == doctest::Approx(0.4));
}

TEST_CASE("dual derivative examples") {
  // projection onto the dual of the free cone, i.e. {0}, is constant
  Rng rng(4);
  const Vector x = random_vector(rng, 3);
  const Vector dx = random_vector(rng, 3);
  CHECK(d_project_dual_apply(PrimitiveCone::free(3), x, dx).norm() == 0.0);

  Vector m3 = Vector::Constant(1, -3.0);
  CHECK(d_project_dual_apply(PrimitiveCone::nonneg(1), m3, Vector::Ones(1))[0] == 0.0);

  // dual exponential cone at a random differentiable point vs finite differences
  for (int i = 0; i < 10; ++i) {
    const PrimitiveCone cone = PrimitiveCone::exp_dual();
    const Vector p = sample_differentiable_point(cone, rng);
    const Vector dir = random_vector(rng, 3, -1.0, 1.0);
    const Vector got = d_project_apply(cone, p, dir);
    const Vector fd =
        fd_directional([&](const Vector& v) { return project(cone, v); }, p, dir);
    CHECK(relative_error(got, fd) <= 1e-5);
  }
}

TEST_CASE("finite differences across all cones") {
  Rng rng(17);
  for (const auto& cone : kAllCones) {
    for (int i = 0; i < 25; ++i) {
      const Vector p = sample_differentiable_point(cone, rng);
      const Vector dir = random_vector(rng, cone.dim(), -1.0, 1.0);
      const Vector got = d_project_apply(cone, p, dir);
      const Vector fd =
          fd_directional([&](const Vector& v) { return project(cone, v); }, p, dir);
      INFO("cone kind ", static_cast<int>(cone.kind), " trial ", i);
      CHECK(relative_error(got, fd) <= 1e-5);
    }
  }
}

TEST_CASE("Moreau decomposition, nonexpansiveness, idempotence") {
  Rng rng(23);
  for (const auto& cone : kAllCones) {
    for (int i = 0; i < 60; ++i) {
      const Vector x = random_vector(rng, cone.dim());
      const Vector px = project(cone, x);
      const Vector q = x - px;  // projection onto the polar cone
      const double scale = std::max(1.0, x.squaredNorm());
      CHECK(std::abs(px.dot(q)) <= 1e-9 * scale);
      // q lies in -K*: its projection onto K is zero
      CHECK(project(cone, q).norm() <= 1e-9 * std::max(1.0, x.norm()));
      // idempotence
      CHECK((project(cone, px) - px).norm() <= 1e-9 * std::max(1.0, x.norm()));
      // nonexpansiveness
      const Vector y = random_vector(rng, cone.dim());
      CHECK((project(cone, y) - px).norm() <= (y - x).norm() + 1e-12);
    }
  }
}

TEST_CASE("derivative is self-adjoint at random differentiable points") {
  Rng rng(31);
  for (const auto& cone : kAllCones) {
    for (int i = 0; i < 20; ++i) {
      const Vector p = sample_differentiable_point(cone, rng);
      const Vector u = random_vector(rng, cone.dim(), -1.0, 1.0);
      const Vector v = random_vector(rng, cone.dim(), -1.0, 1.0);
      const double lhs = d_project_apply(cone, p, u).dot(v);
      const double rhs = u.dot(d_project_apply(cone, p, v));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * u.norm() * v.norm());
    }
  }
}

TEST_CASE("large PSD blocks: finite differences and self-adjointness") {
  const PrimitiveCone cone = PrimitiveCone::psd(10);
  Rng rng(53);
  for (int i = 0; i < 5; ++i) {
    const Vector p = sample_differentiable_point(cone, rng);
    const Vector dir = random_vector(rng, cone.dim(), -1.0, 1.0);
    const Vector got = d_project_apply(cone, p, dir);
    const Vector fd = fd_directional(
        [&](const Vector& v) { return project(cone, v); }, p, dir);
    CHECK(relative_error(got, fd) <= 1e-5);

    const Vector u = random_vector(rng, cone.dim(), -1.0, 1.0);
    const double lhs = got.dot(u);
    const double rhs = dir.dot(d_project_apply(cone, p, u));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * dir.norm() * u.norm());
  }
}

TEST_CASE("PSD complementarity") {
  Rng rng(37);
  const PrimitiveCone cone = PrimitiveCone::psd(4);
  for (int i = 0; i < 40; ++i) {
    const Vector x = random_vector(rng, cone.dim());
    const Vector px = project(cone, x);
    const Matrix P = smat(px);
    const Matrix Q = smat(Vector(px - x));
    CHECK((P * Q).norm() <= 1e-9 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("product cone blockwise operations") {
  ConeSpec spec;
  spec.zero = 1;
  spec.nonneg = 1;
  Vector x(2);
  x << 7.0, -7.0;
  CHECK(project_product(spec, x).norm() == 0.0);

  ConeSpec socspec;
  socspec.soc = {3};
  Vector interior(3);
  interior << 5.0, 1.0, 2.0;
  CHECK((project_product(socspec, interior) - interior).norm() == 0.0);

  // mixed spec matches per-block projections
  ConeSpec mixed;
  mixed.zero = 2;
  mixed.nonneg = 3;
  mixed.soc = {3, 4};
  mixed.psd = {2};
  mixed.exp_primal = 1;
  mixed.exp_dual = 1;
  Rng rng(41);
  const Vector v = random_vector(rng, mixed.total_dim());
  const Vector got = project_product(mixed, v);
  int off = 0;
  for (const auto& cone : mixed.blocks()) {
    const int d = cone.dim();
    CHECK((got.segment(off, d) - project(cone, v.segment(off, d))).norm() == 0.0);
    off += d;
  }
  CHECK(off == mixed.total_dim());
  CHECK_THROWS_AS(project_product(mixed, Vector::Ones(3)), std::invalid_argument);

  // blockwise derivative agrees with per-block derivative
  const Vector dv = random_vector(rng, mixed.total_dim());
  const Vector dgot = d_project_product_apply(mixed, v, dv);
  off = 0;
  for (const auto& cone : mixed.blocks()) {
    const int d = cone.dim();
    CHECK((dgot.segment(off, d) -
           d_project_apply(cone, v.segment(off, d), dv.segment(off, d)))
              .norm() == 0.0);
    off += d;
  }
}

TEST_CASE("cone spec dimensions and validation") {
  ConeSpec spec;
  spec.zero = 2;
  spec.nonneg = 3;
  spec.soc = {3};
  spec.psd = {3};
  spec.exp_primal = 2;
  spec.exp_dual = 1;
  CHECK(spec.total_dim() == 2 + 3 + 3 + 6 + 6 + 3);
  CHECK_NOTHROW(spec.validate());
  spec.soc.push_back(0);
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("svec and smat preserve inner products") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4;
    const Vector a = random_vector(rng, svec_dim(n));
    const Vector b = random_vector(rng, svec_dim(n));
    const Matrix A = smat(a);
    const Matrix B = smat(b);
    CHECK(std::abs(a.dot(b) - (A.transpose() * B).trace()) <= 1e-12);
    CHECK((svec(A) - a).norm() <= 1e-14);
  }
}
