#pragma once

#include "cone_refine/cones.hpp"
#include "cone_refine/linalg.hpp"

namespace cone_refine {

/// Conic program data: minimize c'x subject to Ax + s = b, s in K,
/// where K is the product cone described by `cones`.
struct ConeProgram {
  SparseMatrix A;  // m x n
  Vector b;        // length m
  Vector c;        // length n
  ConeSpec cones;  // total_dim() == m

  int n() const { return A.cols; }
  int m() const { return A.rows; }

  /// Validates A structurally and all dimension couplings.
  void validate() const;
};

}  // namespace cone_refine
