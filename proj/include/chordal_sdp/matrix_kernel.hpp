#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chordal_sdp/graph.hpp"

namespace chordal_sdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// One stored coordinate of a symmetric matrix, row <= col.
struct PatternEntry {
  int row;
  int col;
  friend bool operator==(const PatternEntry&, const PatternEntry&) = default;
};

// Upper-triangular support of a symmetric sparsity pattern. Coordinates are
// stacked column by column (column j, then row i <= j), which is the usual
// symmetric vectorization order restricted to the pattern. All diagonal
// entries are present.
class PatternIndex {
 public:
  PatternIndex() = default;
  explicit PatternIndex(const SparsityGraph& g);
  static PatternIndex full(int n);

  int dim() const noexcept { return n_; }
  int nnz() const noexcept { return static_cast<int>(entries_.size()); }
  const PatternEntry& entry(int k) const { return entries_[k]; }
  std::span<const PatternEntry> entries() const { return entries_; }

  // Coordinate of (i,j) in either triangle, or -1 when outside the pattern.
  int position(int i, int j) const;

  friend bool operator==(const PatternIndex& a, const PatternIndex& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  int n_ = 0;
  std::vector<int> col_start_;
  std::vector<PatternEntry> entries_;
};

// Scaling of an svec coordinate: 1 on the diagonal, sqrt(2) off it.
double svec_scale(const PatternEntry& e);

// Scaled symmetric vectorization over the pattern. Reads the upper triangle
// of m; throws Error(kPatternViolation) if an upper entry outside the
// pattern is nonzero.
Vector svec(const Matrix& m, const PatternIndex& idx);
Matrix smat(const Vector& v, const PatternIndex& idx);

// Full upper triangle of a d x d block; coordinate of (i,j), i<=j, is
// j*(j+1)/2 + i.
constexpr int svec_dim(int d) { return d * (d + 1) / 2; }
Vector svec(const Matrix& m);
Matrix smat(std::span<const double> v, int d);
Matrix smat(const Vector& v, int d);

// Entry selector H_k: clique-local svec coordinate -> global pattern
// coordinate. The sqrt(2) scaling is identical on both sides, so the
// selector is a pure 0/1 map with orthonormal rows.
struct CliqueSelector {
  int clique = 0;
  std::vector<int> vertices;
  std::vector<std::int32_t> map;

  int local_dim() const noexcept { return static_cast<int>(map.size()); }
};

CliqueSelector make_selector(int clique, std::span<const int> vertices, const PatternIndex& idx);

Vector gather(const CliqueSelector& sel, const Vector& x);
void scatter_add(const CliqueSelector& sel, std::span<const double> xk, Vector& accum);
void scatter_add(const CliqueSelector& sel, const Vector& xk, Vector& accum);

// Eigenvalues at or below kPsdClipRelative * max|eigenvalue| are set to zero.
inline constexpr double kPsdClipRelative = 1e-12;

// Frobenius projection onto the PSD cone (symmetric input assumed; only the
// lower triangle is read). Throws Error(kEigenFailure) if the eigensolver
// fails or the input is not finite.
Matrix project_psd(const Matrix& m);

// Same projection applied to a clique-local svec vector in place. Safe to
// call concurrently on distinct blocks.
void project_psd_svec(std::span<double> v, int d);

double min_eigenvalue(const Matrix& m);

}  // namespace chordal_sdp
