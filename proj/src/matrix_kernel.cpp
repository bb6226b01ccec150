#include "chordal_sdp/matrix_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "chordal_sdp/error.hpp"
#include "chordal_sdp/simd/kernels.hpp"

namespace chordal_sdp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

PatternIndex::PatternIndex(const SparsityGraph& g) : n_(g.size()) {
  col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int j = 0; j < n_; ++j) {
    col_start_[j] = static_cast<int>(entries_.size());
    for (int i : g.neighbors(j)) {
      if (i < j) entries_.push_back({i, j});
    }
    entries_.push_back({j, j});
  }
  col_start_[n_] = static_cast<int>(entries_.size());
}

PatternIndex PatternIndex::full(int n) { return PatternIndex(SparsityGraph::complete(n)); }

int PatternIndex::position(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_) return -1;
  const auto first = entries_.begin() + col_start_[j];
  const auto last = entries_.begin() + col_start_[j + 1];
  const auto it = std::lower_bound(first, last, i,
                                   [](const PatternEntry& e, int row) { return e.row < row; });
  if (it == last || it->row != i) return -1;
  return static_cast<int>(it - entries_.begin());
}

double svec_scale(const PatternEntry& e) { return e.row == e.col ? 1.0 : kSqrt2; }

Vector svec(const Matrix& m, const PatternIndex& idx) {
  const int n = idx.dim();
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::kInvalidArgument, "svec: matrix size does not match pattern");
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (m(i, j) != 0.0 && idx.position(i, j) < 0) {
        throw Error(ErrorCode::kPatternViolation,
                    "svec: nonzero at (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside the pattern");
      }
    }
  }
  Vector v(idx.nnz());
  for (int k = 0; k < idx.nnz(); ++k) {
    const auto& e = idx.entry(k);
    v[k] = svec_scale(e) * m(e.row, e.col);
  }
  return v;
}

Matrix smat(const Vector& v, const PatternIndex& idx) {
  if (v.size() != idx.nnz()) {
    throw Error(ErrorCode::kInvalidArgument, "smat: vector length does not match pattern");
  }
  Matrix m = Matrix::Zero(idx.dim(), idx.dim());
  for (int k = 0; k < idx.nnz(); ++k) {
    const auto& e = idx.entry(k);
    const double value = e.row == e.col ? v[k] : v[k] * kInvSqrt2;
    m(e.row, e.col) = value;
    m(e.col, e.row) = value;
  }
  return m;
}

Vector svec(const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  Vector v(svec_dim(d));
  int k = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) v[k++] = kSqrt2 * m(i, j);
    v[k++] = m(j, j);
  }
  return v;
}

Matrix smat(std::span<const double> v, int d) {
  if (static_cast<int>(v.size()) != svec_dim(d)) {
    throw Error(ErrorCode::kInvalidArgument, "smat: vector length does not match block size");
  }
  Matrix m(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      const double value = v[k++] * kInvSqrt2;
      m(i, j) = value;
      m(j, i) = value;
    }
    m(j, j) = v[k++];
  }
  return m;
}

Matrix smat(const Vector& v, int d) {
  return smat(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), d);
}

CliqueSelector make_selector(int clique, std::span<const int> vertices, const PatternIndex& idx) {
  CliqueSelector sel;
  sel.clique = clique;
  sel.vertices.assign(vertices.begin(), vertices.end());
  const int d = static_cast<int>(vertices.size());
  sel.map.reserve(static_cast<std::size_t>(svec_dim(d)));
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a <= b; ++a) {
      const int pos = idx.position(vertices[a], vertices[b]);
      if (pos < 0) {
        throw Error(ErrorCode::kPatternViolation,
                    "clique " + std::to_string(clique) + " is not contained in the pattern");
      }
      sel.map.push_back(pos);
    }
  }
  return sel;
}

Vector gather(const CliqueSelector& sel, const Vector& x) {
  Vector out(sel.local_dim());
  simd::active_kernels().gather(x.data(), sel.map.data(), out.data(), sel.map.size());
  return out;
}

void scatter_add(const CliqueSelector& sel, std::span<const double> xk, Vector& accum) {
  if (static_cast<int>(xk.size()) != sel.local_dim()) {
    throw Error(ErrorCode::kInvalidArgument, "scatter_add: clique-local size mismatch");
  }
  simd::active_kernels().scatter_add(xk.data(), sel.map.data(), accum.data(), sel.map.size());
}

void scatter_add(const CliqueSelector& sel, const Vector& xk, Vector& accum) {
  scatter_add(sel, std::span<const double>(xk.data(), static_cast<std::size_t>(xk.size())), accum);
}

namespace {

// Projects the symmetric matrix held in `work` (lower triangle read) and
// writes the result back into it. Returns false when nothing changed.
bool project_in_place(Matrix& work) {
  if (!work.allFinite()) {
    throw Error(ErrorCode::kEigenFailure, "project_psd: non-finite input");
  }
  const int d = static_cast<int>(work.rows());
  if (d == 1) {
    if (work(0, 0) >= 0.0) return false;
    work(0, 0) = 0.0;
    return true;
  }
  thread_local Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.compute(work, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "project_psd: eigensolver did not converge");
  }
  const auto& lambda = solver.eigenvalues();  // ascending
  const double scale = std::max(std::abs(lambda[0]), std::abs(lambda[d - 1]));
  const double cutoff = kPsdClipRelative * scale;
  int clipped = 0;
  while (clipped < d && lambda[clipped] <= cutoff) ++clipped;
  if (clipped == 0) return false;

  const auto& vecs = solver.eigenvectors();
  if (clipped <= d - clipped) {
    // Subtract the clipped part: A - V_- diag(l_-) V_-^T.
    const auto neg = vecs.leftCols(clipped);
    const Matrix scaled = neg * lambda.head(clipped).asDiagonal();
    work.triangularView<Eigen::Lower>() -= scaled * neg.transpose();
  } else {
    const int kept = d - clipped;
    const auto pos = vecs.rightCols(kept);
    const Matrix scaled = pos * lambda.tail(kept).asDiagonal();
    work.triangularView<Eigen::Lower>() = scaled * pos.transpose();
  }
  work.triangularView<Eigen::StrictlyUpper>() = work.transpose();
  return true;
}

}  // namespace

Matrix project_psd(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "project_psd: matrix is not square");
  }
  Matrix work = m;
  work.triangularView<Eigen::StrictlyUpper>() = work.transpose();
  project_in_place(work);
  return work;
}

void project_psd_svec(std::span<double> v, int d) {
  thread_local Matrix work;
  work.resize(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      const double value = v[k++] * kInvSqrt2;
      work(j, i) = value;
      work(i, j) = value;
    }
    work(j, j) = v[k++];
  }
  if (!project_in_place(work)) return;
  k = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) v[k++] = kSqrt2 * work(j, i);
    v[k++] = work(j, j);
  }
}

double min_eigenvalue(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenFailure, "min_eigenvalue: eigensolver did not converge");
  }
  return solver.eigenvalues()[0];
}

}  // namespace chordal_sdp
