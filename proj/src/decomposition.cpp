#include "chordal_sdp/decomposition.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "chordal_sdp/error.hpp"
#include "chordal_sdp/simd/kernels.hpp"

namespace chordal_sdp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Pivot threshold of the LDL^T factorization of S relative to its largest
// pivot; smaller pivots mean A is (numerically) rank deficient.
constexpr double kPivotTolerance = 1e-12;

}  // namespace

struct DecomposedProblem::Factor {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

DecomposedProblem::DecomposedProblem() = default;
DecomposedProblem::~DecomposedProblem() = default;

DecomposedProblem::DecomposedProblem(DecomposedProblem&& o) noexcept
    : problem_(std::move(o.problem_)),
      aggregate_(std::move(o.aggregate_)),
      extended_(std::move(o.extended_)),
      cliques_(std::move(o.cliques_)),
      selectors_(std::move(o.selectors_)),
      offsets_(std::move(o.offsets_)),
      D_(std::move(o.D_)),
      D_inv_(std::move(o.D_inv_)),
      factor_(std::move(o.factor_)),
      factorizations_(o.factorizations_),
      kkt_solves_(o.kkt_solves_.load()),
      decompose_seconds_(o.decompose_seconds_),
      factor_seconds_(o.factor_seconds_) {}

DecomposedProblem& DecomposedProblem::operator=(DecomposedProblem&& o) noexcept {
  if (this != &o) {
    problem_ = std::move(o.problem_);
    aggregate_ = std::move(o.aggregate_);
    extended_ = std::move(o.extended_);
    cliques_ = std::move(o.cliques_);
    selectors_ = std::move(o.selectors_);
    offsets_ = std::move(o.offsets_);
    D_ = std::move(o.D_);
    D_inv_ = std::move(o.D_inv_);
    factor_ = std::move(o.factor_);
    factorizations_ = o.factorizations_;
    kkt_solves_.store(o.kkt_solves_.load());
    decompose_seconds_ = o.decompose_seconds_;
    factor_seconds_ = o.factor_seconds_;
  }
  return *this;
}

DecomposedProblem decompose(const SdpProblem& p) {
  const auto t0 = Clock::now();
  DecomposedProblem dp;

  std::vector<std::pair<int, int>> edges;
  for (const auto& e : p.pattern.entries()) {
    if (e.row != e.col) edges.emplace_back(e.row, e.col);
  }
  dp.aggregate_ = SparsityGraph::from_edges(p.n(), edges);

  auto ext = chordal_extend(dp.aggregate_);
  dp.cliques_ = maximal_cliques(ext.graph, ext.ordering);
  dp.extended_ = std::move(ext.graph);

  const PatternIndex extended_pattern(dp.extended_);
  dp.problem_ = extended_pattern == p.pattern ? p : p.over(extended_pattern);
  const PatternIndex& idx = dp.problem_.pattern;

  dp.offsets_.assign(1, 0);
  dp.D_ = Vector::Zero(idx.nnz());
  for (int k = 0; k < dp.cliques_.count(); ++k) {
    auto sel = make_selector(k, dp.cliques_.cliques[k], idx);
    for (auto pos : sel.map) dp.D_[pos] += 1.0;
    dp.offsets_.push_back(dp.offsets_.back() + sel.local_dim());
    dp.selectors_.push_back(std::move(sel));
  }
  for (int k = 0; k < idx.nnz(); ++k) {
    if (dp.D_[k] < 1.0) {
      throw Error(ErrorCode::kNotChordal, "pattern entry not covered by any clique");
    }
  }
  dp.D_inv_ = dp.D_.cwiseInverse();
  dp.decompose_seconds_ = seconds_since(t0);
  return dp;
}

DecomposedProblem prepare(const SdpProblem& p) {
  DecomposedProblem dp = decompose(p);
  dp.factor_kkt();
  return dp;
}

void DecomposedProblem::factor_kkt() {
  const auto t0 = Clock::now();
  const RowSparseMatrix& A = problem_.A;
  auto f = std::make_unique<Factor>();
  if (A.rows() > 0) {
    const RowSparseMatrix scaled = A * D_inv_.asDiagonal();
    const SparseMatrix S = SparseMatrix(scaled * A.transpose());
    f->ldlt.compute(S);
    if (f->ldlt.info() != Eigen::Success) {
      throw Error(ErrorCode::kRankDeficient, "factorization of A D^-1 A^T failed");
    }
    const Vector pivots = f->ldlt.vectorD();
    const double largest = pivots.cwiseAbs().maxCoeff();
    if (!(pivots.minCoeff() > kPivotTolerance * largest)) {
      throw Error(ErrorCode::kRankDeficient,
                  "constraint matrix A is rank deficient (redundant or inconsistent constraints)");
    }
  }
  factor_ = std::move(f);
  ++factorizations_;
  factor_seconds_ = seconds_since(t0);
}

KktSolution DecomposedProblem::solve_kkt(const Vector& r1, const Vector& r2) const {
  if (!factor_) throw Error(ErrorCode::kNotFactored, "solve_kkt called before factor_kkt");
  const RowSparseMatrix& A = problem_.A;
  if (r1.size() != D_.size() || r2.size() != A.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "solve_kkt: right-hand side has wrong dimensions");
  }
  kkt_solves_.fetch_add(1, std::memory_order_relaxed);
  const auto& kern = simd::active_kernels();
  const auto n = static_cast<std::size_t>(D_.size());

  KktSolution sol;
  sol.x.resize(D_.size());
  if (A.rows() == 0) {
    kern.hadamard(D_inv_.data(), r1.data(), sol.x.data(), n);
    sol.y.resize(0);
    return sol;
  }

  Vector scaled(D_.size());
  kern.hadamard(D_inv_.data(), r1.data(), scaled.data(), n);
  sol.y = factor_->ldlt.solve(A * scaled - r2);
  const Vector t = r1 - A.transpose() * sol.y;
  kern.hadamard(D_inv_.data(), t.data(), sol.x.data(), n);

  // One refinement step on the second block row; the first holds by
  // construction.
  const Vector correction = factor_->ldlt.solve(r2 - A * sol.x);
  const Vector back = A.transpose() * correction;
  kern.hadamard(D_inv_.data(), back.data(), scaled.data(), n);
  sol.x += scaled;
  sol.y -= correction;
  return sol;
}

double kkt_relative_residual(const Vector& D, const RowSparseMatrix& A, const Vector& r1,
                             const Vector& r2, const Vector& x, const Vector& y) {
  const Vector top = D.cwiseProduct(x) + A.transpose() * y - r1;
  const Vector bottom = A * x - r2;
  const double res = std::sqrt(top.squaredNorm() + bottom.squaredNorm());
  const double scale = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  return scale > 0.0 ? res / scale : res;
}

}  // namespace chordal_sdp
