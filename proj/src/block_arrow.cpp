#include "chordal_sdp/block_arrow.hpp"

#include <random>
#include <string>

#include "chordal_sdp/error.hpp"

namespace chordal_sdp {

namespace {

// std::uniform_real_distribution is implementation defined; this keeps the
// stream identical across standard libraries.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

 private:
  std::mt19937_64 engine_;
};

SparseMatrix to_sparse(const Matrix& dense, const SparsityGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  const int n = g.size();
  for (int j = 0; j < n; ++j) {
    t.emplace_back(j, j, dense(j, j));
    for (int i : g.neighbors(j)) t.emplace_back(i, j, dense(i, j));
  }
  SparseMatrix s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

void BlockArrowSpec::validate() const {
  if (blocks < 1 || block_size < 1 || arrow < 1 || constraints < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "block-arrow spec needs l, d, h, m >= 1 (got l=" + std::to_string(blocks) +
                    " d=" + std::to_string(block_size) + " h=" + std::to_string(arrow) +
                    " m=" + std::to_string(constraints) + ")");
  }
}

SparsityGraph block_arrow_graph(const BlockArrowSpec& spec) {
  spec.validate();
  const int n = spec.n();
  const int head = spec.blocks * spec.block_size;
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < spec.blocks; ++k) {
    const int off = k * spec.block_size;
    for (int a = 0; a < spec.block_size; ++a) {
      for (int b = a + 1; b < spec.block_size; ++b) edges.emplace_back(off + a, off + b);
      for (int h = head; h < n; ++h) edges.emplace_back(off + a, h);
    }
  }
  for (int a = head; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  }
  return SparsityGraph::from_edges(n, edges);
}

SdpData generate_block_arrow(const BlockArrowSpec& spec) {
  const SparsityGraph g = block_arrow_graph(spec);
  const int n = spec.n();
  const int m = spec.constraints;
  const int head = spec.blocks * spec.block_size;
  Uniform rand(spec.seed);

  SdpData data;
  data.n = n;
  data.block_sizes = {n};
  data.A.resize(static_cast<std::size_t>(m));
  data.b.resize(m);

  // A_i and its weight y0_i are drawn together, so only C is held densely.
  Matrix C = Matrix::Zero(n, n);
  Matrix B(n, n);
  for (int i = 0; i < m; ++i) {
    B.setZero();
    for (int c = 0; c < n; ++c) {
      B(c, c) = rand();
      for (int r : g.neighbors(c)) B(r, c) = rand();
    }
    const Matrix Ai = 0.5 * (B + B.transpose());
    data.b[i] = Ai.trace();
    C += rand() * Ai;
    data.A[i] = to_sparse(Ai, g);
  }

  // One positive definite block per maximal clique: block k plus the head.
  const int w = spec.block_size + spec.arrow;
  for (int k = 0; k < spec.blocks; ++k) {
    Matrix G(w, w);
    for (int c = 0; c < w; ++c) {
      for (int r = 0; r < w; ++r) G(r, c) = rand();
    }
    const Matrix W = G * G.transpose() + 0.1 * Matrix::Identity(w, w);
    std::vector<int> idx;
    for (int a = 0; a < spec.block_size; ++a) idx.push_back(k * spec.block_size + a);
    for (int h = head; h < n; ++h) idx.push_back(h);
    for (int c = 0; c < w; ++c) {
      for (int r = 0; r < w; ++r) C(idx[r], idx[c]) += W(r, c);
    }
  }

  data.C = to_sparse(C, g);
  return data;
}

}  // namespace chordal_sdp
