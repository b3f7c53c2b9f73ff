#include "cone_refine/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cone_refine {

const char* instance_kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Feasible:
      return "feasible";
    case InstanceKind::Infeasible:
      return "infeasible";
    case InstanceKind::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

SolutionKind instance_to_solution_kind(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Feasible:
      return SolutionKind::Optimal;
    case InstanceKind::Infeasible:
      return SolutionKind::PrimalInfeasible;
    case InstanceKind::Unbounded:
      return SolutionKind::DualInfeasible;
  }
  return SolutionKind::Indeterminate;
}

SizeProfile SizeProfile::paper() {
  SizeProfile p;
  p.zero = {10, 50};
  p.nonneg = {20, 100};
  p.soc_count = {2, 100};
  p.soc_size = {5, 20};
  p.psd_count = {5, 20};
  p.psd_order = {2, 10};
  p.exp_primal_count = {2, 10};
  p.exp_dual_count = {2, 10};
  return p;
}

SizeProfile SizeProfile::tiny() {
  SizeProfile p;
  p.zero = {1, 3};
  p.nonneg = {2, 6};
  p.soc_count = {1, 3};
  p.soc_size = {2, 5};
  p.psd_count = {1, 2};
  p.psd_order = {2, 3};
  p.exp_primal_count = {1, 2};
  p.exp_dual_count = {1, 2};
  return p;
}

std::optional<SizeProfile> SizeProfile::by_name(const std::string& name) {
  if (name == "paper") return paper();
  if (name == "tiny") return tiny();
  return std::nullopt;
}

namespace {

int draw(Rng& rng, const IntRange& r) {
  return static_cast<int>(rng.uniform_int(r.lo, r.hi));
}

Vector uniform_vector(Rng& rng, int len) {
  Vector v(len);
  for (int i = 0; i < len; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

// Random CSC pattern with i.i.d. entry retention; values uniform in
// [-1, 1]; normalized to unit Frobenius norm.
SparseMatrix random_matrix(Rng& rng, int m, int n, double density) {
  SparseMatrix A;
  A.rows = m;
  A.cols = n;
  A.colptr.resize(n + 1, 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      if (rng.uniform01() < density) {
        A.rowidx.push_back(i);
        A.vals.push_back(rng.uniform(-1.0, 1.0));
      }
    }
    A.colptr[j + 1] = static_cast<int>(A.vals.size());
  }
  const double fnorm = A.frobenius_norm();
  if (fnorm > 0.0) {
    for (double& v : A.vals) v /= fnorm;
  }
  return A;
}

}  // namespace

ConeProgram make_feasible(SparseMatrix A, const ConeSpec& cones, const Vector& x,
                          const Vector& s, const Vector& y) {
  ConeProgram p;
  p.b = spmv(A, x) + s;
  p.c = -spmv_t(A, y);
  p.A = std::move(A);
  p.cones = cones;
  return p;
}

ConeProgram make_infeasible(SparseMatrix A, const ConeSpec& cones, const Vector& y,
                            Rng& rng) {
  const double ynorm2 = y.squaredNorm();
  if (ynorm2 == 0.0) {
    throw std::invalid_argument("make_infeasible: y must be nonzero");
  }
  // dividing by a y_i that is only rounding-level nonzero would put a
  // ~1e14 entry into A and ruin its conditioning, so an entry must carry
  // a significant y_i; fall back to the largest |y_i| on the column
  const double y_min = 1e-6 * y.cwiseAbs().maxCoeff();
  const Vector g = spmv_t(A, y);
  for (int j = 0; j < A.cols; ++j) {
    // first stored entry (CSC order) with significant y_i; if the whole
    // support misses supp(y), the column already has (A'y)_j = 0 exactly
    int pick = -1;
    for (int k = A.colptr[j]; k < A.colptr[j + 1]; ++k) {
      const double yi = std::abs(y[A.rowidx[k]]);
      if (yi >= y_min) {
        pick = k;
        break;
      }
      if (yi > 0.0 && (pick < 0 || yi > std::abs(y[A.rowidx[pick]]))) pick = k;
    }
    if (pick >= 0) A.vals[pick] -= g[j] / y[A.rowidx[pick]];
  }
  ConeProgram p;
  p.b = -y / ynorm2;
  p.c = uniform_vector(rng, A.cols);
  p.A = std::move(A);
  p.cones = cones;
  return p;
}

ConeProgram make_unbounded(SparseMatrix A, const ConeSpec& cones, Vector& x,
                           const Vector& s, Rng& rng) {
  for (int j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) x[j] = 1.0;
  }
  const Vector d = spmv(A, x) + s;

  std::vector<int> col_of_entry(A.nnz());
  for (int j = 0; j < A.cols; ++j) {
    for (int k = A.colptr[j]; k < A.colptr[j + 1]; ++k) col_of_entry[k] = j;
  }
  // first stored entry of each row in ascending column order whose x_j
  // is significant (the correction divides by it), falling back to the
  // largest |x_j| on the row
  const double x_min = 1e-6 * x.cwiseAbs().maxCoeff();
  std::vector<int> row_entry(A.rows, -1);
  std::vector<char> row_done(A.rows, 0);
  for (int j = 0; j < A.cols; ++j) {
    for (int k = A.colptr[j]; k < A.colptr[j + 1]; ++k) {
      const int i = A.rowidx[k];
      if (row_done[i]) continue;
      if (std::abs(x[j]) >= x_min) {
        row_entry[i] = k;
        row_done[i] = 1;
      } else if (row_entry[i] < 0 ||
                 std::abs(x[j]) > std::abs(x[col_of_entry[row_entry[i]]])) {
        row_entry[i] = k;
      }
    }
  }

  // empty rows get a fresh entry in column 0, or in the column of the
  // largest |x_j| if x_0 is insignificant
  int insert_col = 0;
  if (std::abs(x[0]) < x_min) {
    x.cwiseAbs().maxCoeff(&insert_col);
  }
  std::vector<std::pair<int, double>> inserts;
  for (int i = 0; i < A.rows; ++i) {
    if (d[i] == 0.0) continue;
    if (row_entry[i] >= 0) {
      const int k = row_entry[i];
      A.vals[k] -= d[i] / x[col_of_entry[k]];
    } else {
      inserts.emplace_back(i, -d[i] / x[insert_col]);
    }
  }
  if (!inserts.empty()) {
    std::sort(inserts.begin(), inserts.end());
    std::vector<int> rowidx(A.rowidx.begin(), A.rowidx.begin() + A.colptr[insert_col]);
    std::vector<double> vals(A.vals.begin(), A.vals.begin() + A.colptr[insert_col]);
    rowidx.reserve(A.rowidx.size() + inserts.size());
    vals.reserve(A.vals.size() + inserts.size());
    std::size_t ins = 0;
    for (int k = A.colptr[insert_col]; k < A.colptr[insert_col + 1]; ++k) {
      while (ins < inserts.size() && inserts[ins].first < A.rowidx[k]) {
        rowidx.push_back(inserts[ins].first);
        vals.push_back(inserts[ins].second);
        ++ins;
      }
      rowidx.push_back(A.rowidx[k]);
      vals.push_back(A.vals[k]);
    }
    while (ins < inserts.size()) {
      rowidx.push_back(inserts[ins].first);
      vals.push_back(inserts[ins].second);
      ++ins;
    }
    const int added = static_cast<int>(inserts.size());
    rowidx.insert(rowidx.end(), A.rowidx.begin() + A.colptr[insert_col + 1],
                  A.rowidx.end());
    vals.insert(vals.end(), A.vals.begin() + A.colptr[insert_col + 1], A.vals.end());
    A.rowidx = std::move(rowidx);
    A.vals = std::move(vals);
    for (int j = insert_col + 1; j <= A.cols; ++j) A.colptr[j] += added;
  }

  ConeProgram p;
  p.c = -x / x.squaredNorm();
  p.b = uniform_vector(rng, A.rows);
  p.A = std::move(A);
  p.cones = cones;
  return p;
}

GeneratedInstance generate(std::uint64_t seed, const SizeProfile& profile,
                           std::optional<InstanceKind> force_kind) {
  Rng rng(seed);

  ConeSpec cones;
  cones.zero = draw(rng, profile.zero);
  cones.nonneg = draw(rng, profile.nonneg);
  const int nsoc = draw(rng, profile.soc_count);
  for (int i = 0; i < nsoc; ++i) cones.soc.push_back(draw(rng, profile.soc_size));
  const int npsd = draw(rng, profile.psd_count);
  for (int i = 0; i < npsd; ++i) cones.psd.push_back(draw(rng, profile.psd_order));
  cones.exp_primal = draw(rng, profile.exp_primal_count);
  cones.exp_dual = draw(rng, profile.exp_dual_count);

  const int m = cones.total_dim();
  const int n = static_cast<int>(rng.uniform_int(1, m));
  const double density = rng.uniform(0.1, 0.3);
  SparseMatrix A = random_matrix(rng, m, n, density);

  Vector x = uniform_vector(rng, n);
  const Vector r = uniform_vector(rng, m);
  const Vector s = project_product(cones, r);
  const Vector y = s - r;

  InstanceKind kind;
  if (force_kind.has_value()) {
    kind = *force_kind;
  } else {
    const double u = rng.uniform01();
    kind = u < 0.8 ? InstanceKind::Feasible
                   : (u < 0.9 ? InstanceKind::Infeasible : InstanceKind::Unbounded);
  }

  GeneratedInstance instance;
  instance.kind = kind;
  instance.seed = seed;
  switch (kind) {
    case InstanceKind::Feasible:
      instance.program = make_feasible(std::move(A), cones, x, s, y);
      instance.x = x;
      instance.y = y;
      instance.s = s;
      break;
    case InstanceKind::Infeasible:
      instance.program = make_infeasible(std::move(A), cones, y, rng);
      instance.y = y;
      break;
    case InstanceKind::Unbounded:
      instance.program = make_unbounded(std::move(A), cones, x, s, rng);
      instance.x = x;  // adjusted in place by make_unbounded
      instance.s = s;
      break;
  }
  return instance;
}

Vector embed_witness(const GeneratedInstance& instance) {
  return embed_solution(instance.program, instance_to_solution_kind(instance.kind),
                        instance.x, instance.y, instance.s);
}

Classification witness_classification(const GeneratedInstance& instance) {
  Classification cls;
  cls.kind = instance_to_solution_kind(instance.kind);
  cls.x = instance.x;
  cls.y = instance.y;
  cls.s = instance.s;
  return cls;
}

Vector perturb_relative(const Vector& z, double noise, Rng& rng) {
  Vector g(z.size());
  for (int i = 0; i < z.size(); ++i) g[i] = rng.normal();
  const double gnorm = g.norm();
  if (gnorm == 0.0 || noise == 0.0) return z;
  return z + (noise * z.norm() / gnorm) * g;
}

}  // namespace cone_refine
