#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include "chordal_sdp/graph.hpp"
#include "chordal_sdp/matrix_kernel.hpp"
#include "chordal_sdp/problem.hpp"

namespace chordal_sdp {

struct KktSolution {
  Vector x;
  Vector y;
};

// Relative residual of [D A^T; A 0][x; y] = [r1; r2].
double kkt_relative_residual(const Vector& D, const RowSparseMatrix& A, const Vector& r1,
                             const Vector& r2, const Vector& x, const Vector& y);

// Clique decomposition of a sparse SDP: chordal extension of the aggregate
// pattern, maximal cliques, entry selectors H_k and D = sum_k H_k^T H_k,
// plus the cached factorization of the KKT matrix [D A^T; A 0].
//
// The KKT system is solved by block elimination through the Schur complement
// S = A D^-1 A^T, which is factored once. The coefficient matrix does not
// depend on the ADMM penalty, so one factorization serves every iteration of
// both algorithms and survives penalty updates.
class DecomposedProblem {
 public:
  const SdpProblem& problem() const noexcept { return problem_; }
  const SparsityGraph& aggregate_graph() const noexcept { return aggregate_; }
  const SparsityGraph& extended_graph() const noexcept { return extended_; }
  const CliqueSet& cliques() const noexcept { return cliques_; }
  const std::vector<CliqueSelector>& selectors() const noexcept { return selectors_; }
  const Vector& D() const noexcept { return D_; }

  int num_cliques() const noexcept { return cliques_.count(); }
  // Offsets of each clique block in a stacked clique-local vector.
  const std::vector<int>& block_offsets() const noexcept { return offsets_; }
  int stacked_dim() const noexcept { return offsets_.back(); }

  // Factors S = A D^-1 A^T. Throws Error(kRankDeficient) when S is
  // numerically singular.
  void factor_kkt();
  bool factored() const noexcept { return factor_ != nullptr; }

  // y = S^-1 (A D^-1 r1 - r2), x = D^-1 (r1 - A^T y), followed by one
  // refinement step on A x = r2. Throws Error(kNotFactored).
  KktSolution solve_kkt(const Vector& r1, const Vector& r2) const;

  // Instrumentation.
  int factorizations() const noexcept { return factorizations_; }
  long kkt_solves() const noexcept { return kkt_solves_.load(std::memory_order_relaxed); }
  double decompose_seconds() const noexcept { return decompose_seconds_; }
  double factor_seconds() const noexcept { return factor_seconds_; }

  DecomposedProblem(DecomposedProblem&&) noexcept;
  DecomposedProblem& operator=(DecomposedProblem&&) noexcept;
  ~DecomposedProblem();

 private:
  friend DecomposedProblem decompose(const SdpProblem& p);
  DecomposedProblem();

  struct Factor;

  SdpProblem problem_;
  SparsityGraph aggregate_;
  SparsityGraph extended_;
  CliqueSet cliques_;
  std::vector<CliqueSelector> selectors_;
  std::vector<int> offsets_;
  Vector D_;
  Vector D_inv_;
  std::unique_ptr<Factor> factor_;
  int factorizations_ = 0;
  mutable std::atomic<long> kkt_solves_{0};
  double decompose_seconds_ = 0.0;
  double factor_seconds_ = 0.0;
};

// Builds the decomposition over the chordal extension of p's pattern. The
// KKT system is not factored yet.
DecomposedProblem decompose(const SdpProblem& p);

// decompose() followed by factor_kkt().
DecomposedProblem prepare(const SdpProblem& p);

}  // namespace chordal_sdp
