#include "chordal_sdp/problem.hpp"

#include <cmath>
#include <string>

#include "chordal_sdp/error.hpp"

namespace chordal_sdp {

namespace {

void check_matrix(const SparseMatrix& M, int n, const std::string& name) {
  if (M.rows() != n || M.cols() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                name + " is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                    ", expected " + std::to_string(n) + "x" + std::to_string(n));
  }
  const SparseMatrix diff = M - SparseMatrix(M.transpose());
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (std::abs(it.value()) > kSymmetryTolerance) {
        throw Error(ErrorCode::kAsymmetricData,
                    name + " is not symmetric at (" + std::to_string(it.row()) + "," +
                        std::to_string(it.col()) + ")");
      }
    }
  }
}

void check_data(const SdpData& data) {
  if (data.b.size() != data.m()) {
    throw Error(ErrorCode::kInvalidArgument, "b has length " + std::to_string(data.b.size()) +
                                                 " but there are " + std::to_string(data.m()) +
                                                 " constraint matrices");
  }
  check_matrix(data.C, data.n, "C");
  for (int i = 0; i < data.m(); ++i) check_matrix(data.A[i], data.n, "A_" + std::to_string(i + 1));
}

template <typename Visit>
void for_each_upper_nonzero(const SparseMatrix& M, Visit&& visit) {
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(M, k); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      if (i <= j && it.value() != 0.0) visit(i, j, it.value());
    }
  }
}

Vector vectorize(const SparseMatrix& M, const PatternIndex& idx, const char* name) {
  Vector v = Vector::Zero(idx.nnz());
  for_each_upper_nonzero(M, [&](int i, int j, double value) {
    const int pos = idx.position(i, j);
    if (pos < 0) {
      throw Error(ErrorCode::kPatternViolation,
                  std::string(name) + " has a nonzero outside the pattern");
    }
    v[pos] = svec_scale(idx.entry(pos)) * value;
  });
  return v;
}

}  // namespace

SparsityGraph aggregate_pattern(const SdpData& data) {
  check_data(data);
  std::vector<std::pair<int, int>> edges;
  auto collect = [&](int i, int j, double) {
    if (i != j) edges.emplace_back(i, j);
  };
  for_each_upper_nonzero(data.C, collect);
  for (const auto& Ai : data.A) for_each_upper_nonzero(Ai, collect);
  return SparsityGraph::from_edges(data.n, edges);
}

SdpProblem SdpProblem::from_data(const SdpData& data) {
  return from_data(data, aggregate_pattern(data));
}

SdpProblem SdpProblem::from_data(const SdpData& data, const SparsityGraph& pattern) {
  check_data(data);
  if (pattern.size() != data.n) {
    throw Error(ErrorCode::kInvalidArgument, "pattern size does not match the data");
  }
  SdpProblem p;
  p.pattern = PatternIndex(pattern);
  p.c = vectorize(data.C, p.pattern, "C");
  p.b = data.b;

  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < data.m(); ++i) {
    for_each_upper_nonzero(data.A[i], [&](int r, int c, double value) {
      const int pos = p.pattern.position(r, c);
      if (pos < 0) {
        throw Error(ErrorCode::kPatternViolation,
                    "A_" + std::to_string(i + 1) + " has a nonzero outside the pattern");
      }
      triplets.emplace_back(i, pos, svec_scale(p.pattern.entry(pos)) * value);
    });
  }
  p.A.resize(data.m(), p.pattern.nnz());
  p.A.setFromTriplets(triplets.begin(), triplets.end());
  p.A.makeCompressed();
  return p;
}

SdpProblem SdpProblem::over(const PatternIndex& superset) const {
  if (superset.dim() != n()) {
    throw Error(ErrorCode::kInvalidArgument, "superset pattern has a different dimension");
  }
  std::vector<int> remap(static_cast<std::size_t>(pattern.nnz()));
  for (int k = 0; k < pattern.nnz(); ++k) {
    const auto& e = pattern.entry(k);
    remap[k] = superset.position(e.row, e.col);
    if (remap[k] < 0) {
      throw Error(ErrorCode::kPatternViolation, "target pattern does not contain the source");
    }
  }
  SdpProblem out;
  out.pattern = superset;
  out.b = b;
  out.c = Vector::Zero(superset.nnz());
  for (int k = 0; k < pattern.nnz(); ++k) out.c[remap[k]] = c[k];

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(A.nonZeros()));
  for (int i = 0; i < A.outerSize(); ++i) {
    for (RowSparseMatrix::InnerIterator it(A, i); it; ++it) {
      triplets.emplace_back(i, remap[it.col()], it.value());
    }
  }
  out.A.resize(m(), superset.nnz());
  out.A.setFromTriplets(triplets.begin(), triplets.end());
  out.A.makeCompressed();
  return out;
}

Matrix SdpProblem::cost_matrix() const { return smat(c, pattern); }

Matrix SdpProblem::constraint_matrix(int i) const {
  const Vector row = A.row(i).transpose().toDense();
  return smat(row, pattern);
}

}  // namespace chordal_sdp
