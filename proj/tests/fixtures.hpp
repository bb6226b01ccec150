#pragma once

#include <random>
#include <vector>

#include "chordal_sdp/block_arrow.hpp"
#include "chordal_sdp/problem.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace chordal_sdp;

inline SparseMatrix sparse(const Matrix& m) { return m.sparseView(0.0, 0.0); }

inline SdpData make_data(const Matrix& C, const std::vector<Matrix>& A, const Vector& b) {
  SdpData d;
  d.n = static_cast<int>(C.rows());
  d.C = sparse(C);
  for (const auto& a : A) d.A.push_back(sparse(a));
  d.b = b;
  return d;
}

// Random data supported on g: m dense-on-pattern constraint matrices and a
// cost matrix. Not necessarily feasible; for KKT tests.
inline SdpData random_data_on(const SparsityGraph& g, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = g.size();
  auto on_pattern = [&] {
    Matrix a = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      a(j, j) = u(rng);
      for (int i : g.neighbors(j)) {
        if (i < j) a(i, j) = a(j, i) = u(rng);
      }
    }
    return a;
  };
  std::vector<Matrix> A;
  for (int i = 0; i < m; ++i) A.push_back(on_pattern());
  Vector b(m);
  for (int i = 0; i < m; ++i) b[i] = u(rng);
  return make_data(on_pattern(), A, b);
}

// Small random block-arrow spec within l<=4, d<=4, h<=3, m<=15.
inline BlockArrowSpec random_small_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> l(1, 4), d(1, 4), h(1, 3), m(1, 15);
  BlockArrowSpec s;
  s.blocks = l(rng);
  s.block_size = d(rng);
  s.arrow = h(rng);
  // m may not exceed the number of free entries on the pattern.
  const int nnz = s.n() + static_cast<int>(block_arrow_graph(s).num_edges());
  s.constraints = std::min(m(rng), nnz);
  s.seed = rng();
  return s;
}

}  // namespace fixtures
