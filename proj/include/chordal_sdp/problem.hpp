#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "chordal_sdp/graph.hpp"
#include "chordal_sdp/matrix_kernel.hpp"

namespace chordal_sdp {

using SparseMatrix = Eigen::SparseMatrix<double>;
using RowSparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Raw SDP data in the standard pair
//   min <C,X>  s.t. <A_i,X> = b_i, X psd
//   max <b,y>  s.t. sum_i y_i A_i + Z = C, Z psd
// Matrices are stored with both triangles.
struct SdpData {
  int n = 0;
  SparseMatrix C;
  std::vector<SparseMatrix> A;
  Vector b;
  // Block structure carried over from SDPA input (negative = diagonal
  // block). Blocks are laid out consecutively along the diagonal.
  std::vector<int> block_sizes;

  int m() const noexcept { return static_cast<int>(A.size()); }
};

// Union of the supports of C and every A_i, self-loops implied. Throws
// Error(kAsymmetricData) if a matrix differs from its transpose by more than
// kSymmetryTolerance, Error(kInvalidArgument) on size mismatches.
inline constexpr double kSymmetryTolerance = 1e-12;
SparsityGraph aggregate_pattern(const SdpData& data);

// Vectorized problem over a pattern: c = svec(C), row i of A = svec(A_i),
// all restricted to the pattern coordinates.
struct SdpProblem {
  PatternIndex pattern;
  Vector c;
  RowSparseMatrix A;
  Vector b;

  int n() const noexcept { return pattern.dim(); }
  int m() const noexcept { return static_cast<int>(A.rows()); }

  // Over the aggregate sparsity pattern.
  static SdpProblem from_data(const SdpData& data);
  // Over a caller-supplied pattern, which must contain the aggregate one.
  static SdpProblem from_data(const SdpData& data, const SparsityGraph& pattern);

  // Same problem re-expressed over a pattern containing this one; new
  // coordinates carry zero data.
  SdpProblem over(const PatternIndex& superset) const;

  // Expands back to dense matrices (small problems, tests and debugging).
  Matrix cost_matrix() const;
  Matrix constraint_matrix(int i) const;
};

}  // namespace chordal_sdp
