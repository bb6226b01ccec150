#include "chordal_sdp/admm.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>

#include "chordal_sdp/error.hpp"
#include "chordal_sdp/simd/kernels.hpp"

namespace chordal_sdp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int resolve_threads(const SolverConfig& cfg) {
  if (cfg.num_threads > 0) return cfg.num_threads;
  if (const char* env = std::getenv("CHORDAL_SDP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

// Runs fn(k) for every clique, concurrently when requested. The first
// exception thrown by any block is rethrown after the loop.
template <typename Fn>
void for_each_clique(int p, bool parallel, int threads, Fn&& fn) {
  if (!parallel || threads <= 1 || p < 2) {
    for (int k = 0; k < p; ++k) fn(k);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (int k = 0; k < p; ++k) {
    try {
      fn(k);
    } catch (...) {
#pragma omp critical(chordal_sdp_clique_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// out = sum_k H_k^T stack_k
void scatter_stack(const DecomposedProblem& dp, std::span<const double> stack, Vector& out) {
  const auto& kern = simd::active_kernels();
  const auto& offsets = dp.block_offsets();
  out.setZero(dp.problem().pattern.nnz());
  for (const auto& sel : dp.selectors()) {
    const int off = offsets[sel.clique];
    kern.scatter_add(stack.data() + off, sel.map.data(), out.data(), sel.map.size());
  }
}

std::span<double> block(Vector& stack, const DecomposedProblem& dp, int k) {
  const auto& off = dp.block_offsets();
  return {stack.data() + off[k], static_cast<std::size_t>(off[k + 1] - off[k])};
}

std::vector<Matrix> unpack_blocks(const DecomposedProblem& dp, const Vector& stack) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(dp.num_cliques()));
  const auto& off = dp.block_offsets();
  for (int k = 0; k < dp.num_cliques(); ++k) {
    const int d = static_cast<int>(dp.cliques().cliques[k].size());
    out.push_back(smat(std::span<const double>(stack.data() + off[k], off[k + 1] - off[k]), d));
  }
  return out;
}

void check_ready(const DecomposedProblem& dp, const SolverConfig& cfg) {
  cfg.validate();
  if (!dp.factored()) {
    throw Error(ErrorCode::kNotFactored, "the KKT system must be factored before solving");
  }
}

void check_size(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("initial state: ") + what + " has the wrong dimension");
  }
}

bool finite(double v) { return std::isfinite(v); }

// Bookkeeping shared by both algorithms.
class RunRecorder {
 public:
  RunRecorder(const DecomposedProblem& dp, const SolverConfig& cfg, SolverForm form,
              const ProgressCallback& progress)
      : cfg_(cfg), progress_(progress), start_(Clock::now()) {
    result_.form = form;
    result_.cliques = clique_stats(dp.cliques());
    result_.counters.factorizations = dp.factorizations();
    result_.timings.setup_s = dp.decompose_seconds() + dp.factor_seconds();
  }

  SolverResult& result() { return result_; }

  // Returns true when the run should stop.
  bool record(int iter, const Residuals& r, double objective, double rho, double affine) {
    IterationRecord rec{iter, r.eps_p, r.eps_d, objective, rho, affine};
    result_.iterations = iter;
    result_.eps_p = r.eps_p;
    result_.eps_d = r.eps_d;
    result_.objective = objective;
    result_.rho = rho;
    result_.max_affine_residual = std::max(result_.max_affine_residual, affine);
    if (cfg_.record_trace) result_.trace.push_back(rec);
    if (progress_) progress_(rec);
    if (!finite(r.eps_p) || !finite(r.eps_d) || !finite(objective)) {
      fail("non-finite iterate at iteration " + std::to_string(iter));
      return true;
    }
    if (std::max(r.eps_p, r.eps_d) < cfg_.eps_tol) {
      result_.status = SolverStatus::kSolved;
      return true;
    }
    return false;
  }

  void fail(const std::string& message) {
    result_.status = SolverStatus::kNumericalError;
    result_.message = message;
  }

  SolverResult finish() {
    result_.timings.iterate_s = seconds_since(start_);
    if (result_.status == SolverStatus::kMaxIterReached && result_.message.empty()) {
      result_.message = "iteration limit reached";
    }
    return std::move(result_);
  }

 private:
  const SolverConfig& cfg_;
  const ProgressCallback& progress_;
  Clock::time_point start_;
  SolverResult result_;
};

}  // namespace

const char* to_string(SolverForm form) {
  return form == SolverForm::kPrimal ? "primal" : "dual";
}

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kSolved: return "solved";
    case SolverStatus::kMaxIterReached: return "max_iter_reached";
    case SolverStatus::kNumericalError: return "numerical_error";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!(rho > 0.0) || !std::isfinite(rho)) bad("rho must be positive");
  if (!(eps_tol > 0.0)) bad("eps_tol must be positive");
  if (max_iter < 1) bad("max_iter must be at least 1");
  if (!(rho_mu > 1.0)) bad("rho_mu must exceed 1");
  if (!(rho_tau > 1.0)) bad("rho_tau must exceed 1");
  if (rho_adapt_interval < 1) bad("rho_adapt_interval must be at least 1");
  if (num_threads < 0) bad("num_threads must be non-negative");
}

PrimalState PrimalState::zeros(const DecomposedProblem& dp) {
  PrimalState s;
  s.x = Vector::Zero(dp.problem().pattern.nnz());
  s.xk = Vector::Zero(dp.stacked_dim());
  s.lam = Vector::Zero(dp.stacked_dim());
  return s;
}

DualState DualState::zeros(const DecomposedProblem& dp) {
  DualState s;
  s.y = Vector::Zero(dp.problem().m());
  s.zk = Vector::Zero(dp.stacked_dim());
  s.vk = Vector::Zero(dp.stacked_dim());
  s.lam = Vector::Zero(dp.stacked_dim());
  s.x = Vector::Zero(dp.problem().pattern.nnz());
  return s;
}

CliqueStats clique_stats(const CliqueSet& cliques) {
  return {cliques.count(), cliques.max_size(), cliques.min_size()};
}

Residuals compute_residuals(const DecomposedProblem& dp, std::span<const double> blocks,
                            std::span<const double> consensus,
                            std::span<const double> prev_blocks, std::span<const double> lam,
                            double rho) {
  const auto& kern = simd::active_kernels();
  const std::size_t n = blocks.size();
  Residuals r;
  r.primal_abs = std::sqrt(kern.squared_distance(blocks.data(), consensus.data(), n));
  const double blocks_norm = std::sqrt(kern.dot(blocks.data(), blocks.data(), n));
  const double consensus_norm = std::sqrt(kern.dot(consensus.data(), consensus.data(), n));
  r.eps_p = r.primal_abs / std::max({blocks_norm, consensus_norm, 1.0});

  Vector change(static_cast<Eigen::Index>(n));
  kern.sub_scaled(blocks.data(), 1.0, prev_blocks.data(), change.data(), n);
  Vector scattered;
  scatter_stack(dp, {change.data(), n}, scattered);
  r.dual_abs = rho * scattered.norm();
  scatter_stack(dp, lam, scattered);
  r.eps_d = r.dual_abs / std::max(scattered.norm(), 1.0);
  return r;
}

double adapt_rho(double rho, double primal_abs, double dual_abs, const SolverConfig& cfg) {
  if (primal_abs > cfg.rho_mu * dual_abs) return rho * cfg.rho_tau;
  if (dual_abs > cfg.rho_mu * primal_abs) return rho / cfg.rho_tau;
  return rho;
}

SolverResult solve_primal(const DecomposedProblem& dp, const SolverConfig& cfg,
                          std::optional<PrimalState> init, const ProgressCallback& progress) {
  check_ready(dp, cfg);
  const auto& kern = simd::active_kernels();
  const SdpProblem& prob = dp.problem();
  const int p = dp.num_cliques();
  const int nnz = prob.pattern.nnz();
  const auto stack = static_cast<std::size_t>(dp.stacked_dim());
  const int threads = resolve_threads(cfg);

  PrimalState st = init ? std::move(*init) : PrimalState::zeros(dp);
  check_size(st.x, nnz, "x");
  check_size(st.xk, dp.stacked_dim(), "x_k");
  check_size(st.lam, dp.stacked_dim(), "lambda_k");

  RunRecorder rec(dp, cfg, SolverForm::kPrimal, progress);
  SolverResult& res = rec.result();
  double rho = cfg.rho;
  double rho_at_kkt = rho;
  Vector y_kkt = Vector::Zero(prob.m());
  Vector tmp(dp.stacked_dim()), hx(dp.stacked_dim()), prev(dp.stacked_dim());
  Vector rhs(nnz);
  const double b_scale = std::max(prob.b.norm(), 1.0);

  const int first = st.iter + 1;
  const int last = st.iter + cfg.max_iter;
  try {
    for (int iter = first; iter <= last; ++iter) {
      // x-update: KKT system with rhs (sum H_k^T (x_k + lam_k/rho) - c/rho, b).
      auto t0 = Clock::now();
      tmp = st.xk;
      kern.axpy(1.0 / rho, st.lam.data(), tmp.data(), stack);
      scatter_stack(dp, {tmp.data(), stack}, rhs);
      kern.axpy(-1.0 / rho, prob.c.data(), rhs.data(), static_cast<std::size_t>(nnz));
      KktSolution sol = dp.solve_kkt(rhs, prob.b);
      ++res.counters.kkt_solves;
      st.x = std::move(sol.x);
      y_kkt = std::move(sol.y);
      rho_at_kkt = rho;
      res.timings.kkt_s += seconds_since(t0);

      // x_k-update: project H_k x - lam_k/rho onto each clique cone.
      t0 = Clock::now();
      prev = st.xk;
      for_each_clique(p, cfg.parallel_projections, threads, [&](int k) {
        const auto& sel = dp.selectors()[k];
        const auto hk = block(hx, dp, k);
        const auto xk = block(st.xk, dp, k);
        const auto lk = block(st.lam, dp, k);
        kern.gather(st.x.data(), sel.map.data(), hk.data(), hk.size());
        kern.sub_scaled(hk.data(), 1.0 / rho, lk.data(), xk.data(), xk.size());
        project_psd_svec(xk, static_cast<int>(sel.vertices.size()));
      });
      res.counters.projections += p;
      res.timings.projection_s += seconds_since(t0);

      // Multiplier ascent.
      t0 = Clock::now();
      kern.multiplier_step(rho, st.xk.data(), hx.data(), st.lam.data(), stack);
      const Residuals r = compute_residuals(dp, {st.xk.data(), stack}, {hx.data(), stack},
                                            {prev.data(), stack}, {st.lam.data(), stack}, rho);
      const double objective = kern.dot(prob.c.data(), st.x.data(), static_cast<std::size_t>(nnz));
      const double affine = (prob.A * st.x - prob.b).norm() / b_scale;
      res.timings.update_s += seconds_since(t0);
      st.iter = iter;

      if (!st.x.allFinite()) {
        rec.fail("non-finite iterate at iteration " + std::to_string(iter));
        break;
      }
      if (rec.record(iter, r, objective, rho, affine)) break;
      if (cfg.adaptive_rho && iter % cfg.rho_adapt_interval == 0) {
        rho = adapt_rho(rho, r.primal_abs, r.dual_abs, cfg);
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEigenFailure) throw;
    rec.fail(e.what());
  }

  res.rho = rho;
  res.x = st.x;
  res.y = -rho_at_kkt * y_kkt;
  res.X_blocks = unpack_blocks(dp, st.xk);
  res.Z_blocks = unpack_blocks(dp, st.lam);
  res.primal_state = std::move(st);
  return rec.finish();
}

SolverResult solve_dual(const DecomposedProblem& dp, const SolverConfig& cfg,
                        std::optional<DualState> init, const ProgressCallback& progress) {
  check_ready(dp, cfg);
  const auto& kern = simd::active_kernels();
  const SdpProblem& prob = dp.problem();
  const int p = dp.num_cliques();
  const int nnz = prob.pattern.nnz();
  const auto stack = static_cast<std::size_t>(dp.stacked_dim());
  const int threads = resolve_threads(cfg);

  DualState st = init ? std::move(*init) : DualState::zeros(dp);
  check_size(st.y, prob.m(), "y");
  check_size(st.zk, dp.stacked_dim(), "z_k");
  check_size(st.vk, dp.stacked_dim(), "v_k");
  check_size(st.lam, dp.stacked_dim(), "lambda_k");
  check_size(st.x, nnz, "x");

  RunRecorder rec(dp, cfg, SolverForm::kDual, progress);
  SolverResult& res = rec.result();
  double rho = cfg.rho;
  double rho_at_kkt = rho;
  Vector tmp(dp.stacked_dim()), hx(dp.stacked_dim()), prev(dp.stacked_dim());
  Vector rhs(nnz), slack_sum(nnz);
  const double c_scale = std::max(prob.c.norm(), 1.0);

  const int first = st.iter + 1;
  const int last = st.iter + cfg.max_iter;
  try {
    for (int iter = first; iter <= last; ++iter) {
      // z_k-update: project v_k - lam_k/rho onto each clique cone.
      auto t0 = Clock::now();
      prev = st.zk;
      for_each_clique(p, cfg.parallel_projections, threads, [&](int k) {
        const auto zk = block(st.zk, dp, k);
        const auto vk = block(st.vk, dp, k);
        const auto lk = block(st.lam, dp, k);
        kern.sub_scaled(vk.data(), 1.0 / rho, lk.data(), zk.data(), zk.size());
        project_psd_svec(zk, static_cast<int>(dp.selectors()[k].vertices.size()));
      });
      res.counters.projections += p;
      res.timings.projection_s += seconds_since(t0);

      // (x, y)-update: KKT system with rhs (c - sum H_k^T (z_k + lam_k/rho), -b/rho).
      t0 = Clock::now();
      tmp = st.zk;
      kern.axpy(1.0 / rho, st.lam.data(), tmp.data(), stack);
      scatter_stack(dp, {tmp.data(), stack}, rhs);
      rhs = prob.c - rhs;
      KktSolution sol = dp.solve_kkt(rhs, -prob.b / rho);
      ++res.counters.kkt_solves;
      st.x = std::move(sol.x);
      st.y = std::move(sol.y);
      rho_at_kkt = rho;
      res.timings.kkt_s += seconds_since(t0);

      // v_k = z_k + lam_k/rho + H_k x, then lam_k = -rho H_k x, which is the
      // gradient step lam_k + rho (z_k - v_k) written out.
      t0 = Clock::now();
      for (const auto& sel : dp.selectors()) {
        const auto hk = block(hx, dp, sel.clique);
        kern.gather(st.x.data(), sel.map.data(), hk.data(), hk.size());
      }
      st.vk = tmp + hx;
      st.lam = -rho * hx;

      const Residuals r = compute_residuals(dp, {st.zk.data(), stack}, {st.vk.data(), stack},
                                            {prev.data(), stack}, {st.lam.data(), stack}, rho);
      const double objective = prob.b.dot(st.y);
      scatter_stack(dp, {st.vk.data(), stack}, slack_sum);
      const double affine =
          (prob.c - prob.A.transpose() * st.y - slack_sum).norm() / c_scale;
      res.timings.update_s += seconds_since(t0);
      st.iter = iter;

      if (!st.x.allFinite() || !st.y.allFinite()) {
        rec.fail("non-finite iterate at iteration " + std::to_string(iter));
        break;
      }
      if (rec.record(iter, r, objective, rho, affine)) break;
      if (cfg.adaptive_rho && iter % cfg.rho_adapt_interval == 0) {
        rho = adapt_rho(rho, r.primal_abs, r.dual_abs, cfg);
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEigenFailure) throw;
    rec.fail(e.what());
  }

  res.rho = rho;
  res.x = -rho_at_kkt * st.x;
  res.y = st.y;
  res.X_blocks = unpack_blocks(dp, st.lam);
  res.Z_blocks = unpack_blocks(dp, st.zk);
  res.dual_state = std::move(st);
  return rec.finish();
}

SolverResult solve(const DecomposedProblem& dp, SolverForm form, const SolverConfig& cfg,
                   const ProgressCallback& progress) {
  return form == SolverForm::kPrimal ? solve_primal(dp, cfg, std::nullopt, progress)
                                     : solve_dual(dp, cfg, std::nullopt, progress);
}

SolverResult solve_dense_reference(const SdpProblem& p, const SolverConfig& cfg, SolverForm form,
                                   const ProgressCallback& progress) {
  if (p.n() > kDenseReferenceMaxSize) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "dense reference is limited to n <= " + std::to_string(kDenseReferenceMaxSize) +
                    " (got n = " + std::to_string(p.n()) + ")");
  }
  const DecomposedProblem dp = prepare(p.over(PatternIndex::full(p.n())));
  return solve(dp, form, cfg, progress);
}

}  // namespace chordal_sdp
