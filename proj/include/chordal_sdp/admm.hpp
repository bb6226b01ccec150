#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chordal_sdp/decomposition.hpp"
#include "chordal_sdp/matrix_kernel.hpp"

namespace chordal_sdp {

enum class SolverForm { kPrimal, kDual };
enum class SolverStatus { kSolved, kMaxIterReached, kNumericalError };

const char* to_string(SolverForm form);
const char* to_string(SolverStatus status);

struct SolverConfig {
  double rho = 1.0;
  double eps_tol = 1e-3;
  int max_iter = 2000;

  // Residual balancing: rho *= tau when the primal residual exceeds mu times
  // the dual one, rho /= tau in the opposite case. Checked every
  // rho_adapt_interval iterations.
  bool adaptive_rho = false;
  double rho_mu = 10.0;
  double rho_tau = 2.0;
  int rho_adapt_interval = 10;

  bool parallel_projections = false;
  // 0: CHORDAL_SDP_THREADS if set, else the OpenMP default.
  int num_threads = 0;

  bool record_trace = false;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double eps_p = 0.0;
  double eps_d = 0.0;
  double objective = 0.0;
  double rho = 0.0;
  // Primal form: ||Ax - b|| / max(||b||, 1).
  // Dual form:   ||c - A^T y - sum_k H_k^T v_k|| / max(||c||, 1).
  double affine_residual = 0.0;
};

using ProgressCallback = std::function<void(const IterationRecord&)>;

// Clique-local vectors are stacked in clique order using
// DecomposedProblem::block_offsets().
struct PrimalState {
  Vector x;
  Vector xk;
  Vector lam;
  int iter = 0;

  static PrimalState zeros(const DecomposedProblem& dp);
};

struct DualState {
  Vector y;
  Vector zk;
  Vector vk;
  Vector lam;
  Vector x;  // multiplier of the KKT step, scaled by rho
  int iter = 0;

  static DualState zeros(const DecomposedProblem& dp);
};

struct SolverTimings {
  double setup_s = 0.0;
  double kkt_s = 0.0;
  double projection_s = 0.0;
  double update_s = 0.0;
  double iterate_s = 0.0;
};

struct SolverCounters {
  long kkt_solves = 0;
  long projections = 0;
  int factorizations = 0;
};

struct CliqueStats {
  int count = 0;
  int max_size = 0;
  int min_size = 0;
};

CliqueStats clique_stats(const CliqueSet& cliques);

struct SolverResult {
  SolverForm form = SolverForm::kPrimal;
  SolverStatus status = SolverStatus::kMaxIterReached;
  std::string message;

  // <c,x> for the primal form (x is affine feasible but only approximately
  // cone feasible), <b,y> for the dual form.
  double objective = 0.0;
  double eps_p = 0.0;
  double eps_d = 0.0;
  int iterations = 0;
  double rho = 0.0;
  double max_affine_residual = 0.0;

  // Primal estimate (svec over the extended pattern) and dual multipliers y
  // of the original SDP pair.
  Vector x;
  Vector y;
  // Clique blocks of the primal X and of the dual slack Z.
  std::vector<Matrix> X_blocks;
  std::vector<Matrix> Z_blocks;

  std::optional<PrimalState> primal_state;
  std::optional<DualState> dual_state;

  SolverTimings timings;
  SolverCounters counters;
  CliqueStats cliques;
  std::vector<IterationRecord> trace;
};

struct Residuals {
  double eps_p = 0.0;
  double eps_d = 0.0;
  double primal_abs = 0.0;  // ||stack(blocks - consensus)||
  double dual_abs = 0.0;    // rho ||sum_k H_k^T (blocks - prev_blocks)||
};

// Relative residuals shared by both algorithms:
//   eps_p = ||blocks - consensus|| / max(||blocks||, ||consensus||, 1)
//   eps_d = rho ||sum H_k^T (blocks - prev)|| / max(||sum H_k^T lam||, 1)
// Primal form: blocks = x_k, consensus = H_k x. Dual form: blocks = z_k,
// consensus = v_k.
Residuals compute_residuals(const DecomposedProblem& dp, std::span<const double> blocks,
                            std::span<const double> consensus,
                            std::span<const double> prev_blocks, std::span<const double> lam,
                            double rho);

// Residual balancing step; returns the new penalty (unchanged when neither
// residual dominates). Multipliers are stored unscaled, so they need no
// adjustment, and the cached KKT factorization stays valid.
double adapt_rho(double rho, double primal_abs, double dual_abs, const SolverConfig& cfg);

// Decomposed primal-form ADMM: KKT step, clique projections, multiplier
// ascent. Requires dp.factored().
SolverResult solve_primal(const DecomposedProblem& dp, const SolverConfig& cfg,
                          std::optional<PrimalState> init = std::nullopt,
                          const ProgressCallback& progress = {});

// Decomposed dual-form ADMM: clique projections, KKT step, slack update,
// multiplier obtained by scaling H_k x. Requires dp.factored().
SolverResult solve_dual(const DecomposedProblem& dp, const SolverConfig& cfg,
                        std::optional<DualState> init = std::nullopt,
                        const ProgressCallback& progress = {});

SolverResult solve(const DecomposedProblem& dp, SolverForm form, const SolverConfig& cfg,
                   const ProgressCallback& progress = {});

// Same iteration on the undecomposed cone: the problem is lifted to the
// dense pattern, which decomposes into the single clique {0..n-1}.
inline constexpr int kDenseReferenceMaxSize = 200;
SolverResult solve_dense_reference(const SdpProblem& p, const SolverConfig& cfg,
                                   SolverForm form = SolverForm::kPrimal,
                                   const ProgressCallback& progress = {});

}  // namespace chordal_sdp
