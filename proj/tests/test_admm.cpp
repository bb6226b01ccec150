#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "chordal_sdp/admm.hpp"
#include "chordal_sdp/block_arrow.hpp"
#include "chordal_sdp/error.hpp"
#include "fixtures.hpp"

using namespace chordal_sdp;
using fixtures::make_data;

namespace {

SdpProblem scalar_problem() {
  Vector b(1);
  b << 2.0;
  return SdpProblem::from_data(make_data(Matrix::Ones(1, 1), {Matrix::Ones(1, 1)}, b));
}

SdpProblem arrow_problem(int l, int d, int h, int m, std::uint64_t seed) {
  return SdpProblem::from_data(generate_block_arrow({l, d, h, m, seed}));
}

SolverConfig tight(double tol = 1e-5, int max_iter = 20000) {
  SolverConfig cfg;
  cfg.eps_tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Matrix assemble(const DecomposedProblem& dp, const std::vector<Matrix>& blocks) {
  const int n = dp.problem().n();
  Matrix Z = Matrix::Zero(n, n);
  for (int k = 0; k < dp.num_cliques(); ++k) {
    const auto& c = dp.cliques().cliques[k];
    for (std::size_t a = 0; a < c.size(); ++a) {
      for (std::size_t b = 0; b < c.size(); ++b) Z(c[a], c[b]) += blocks[k](a, b);
    }
  }
  return Z;
}

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_DOUBLE_EQ(cfg.eps_tol, 1e-3);
  EXPECT_EQ(cfg.max_iter, 2000);
  cfg.rho = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = SolverConfig{};
  cfg.rho_tau = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(AdaptRho, ResidualBalancing) {
  SolverConfig cfg;
  EXPECT_DOUBLE_EQ(adapt_rho(1.0, 1.0, 1.0, cfg), 1.0);
  EXPECT_DOUBLE_EQ(adapt_rho(1.0, 100.0, 1.0, cfg), 2.0);
  EXPECT_DOUBLE_EQ(adapt_rho(1.0, 1.0, 100.0, cfg), 0.5);
  EXPECT_DOUBLE_EQ(adapt_rho(3.0, 10.0, 1.0, cfg), 3.0);
}

TEST(Residuals, ExactConsensusIsZero) {
  const auto dp = prepare(arrow_problem(2, 2, 1, 3, 1));
  const Vector blocks = Vector::Random(dp.stacked_dim());
  const Vector lam = Vector::Random(dp.stacked_dim());
  auto s = [](const Vector& v) { return std::span<const double>(v.data(), v.size()); };
  const auto r = compute_residuals(dp, s(blocks), s(blocks), s(blocks), s(lam), 1.0);
  EXPECT_EQ(r.eps_p, 0.0);
  EXPECT_EQ(r.eps_d, 0.0);
}

TEST(SolvePrimal, ScalarHandSimulation) {
  const auto dp = prepare(scalar_problem());
  SolverConfig cfg;
  cfg.record_trace = true;
  const auto r = solve_primal(dp, cfg);
  // x = 2 is forced by the constraint; iteration 1 moves x_1 from 0 to 2.
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_DOUBLE_EQ(r.trace[0].eps_p, 0.0);
  EXPECT_DOUBLE_EQ(r.trace[0].eps_d, 2.0);
  EXPECT_DOUBLE_EQ(r.trace[1].eps_d, 0.0);
  EXPECT_EQ(r.status, SolverStatus::kSolved);
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
  EXPECT_DOUBLE_EQ(r.x[0], 2.0);
}

TEST(SolveDual, ScalarHandSimulation) {
  const auto dp = prepare(scalar_problem());
  SolverConfig cfg;
  cfg.record_trace = true;
  const auto r = solve_dual(dp, cfg);
  // iteration 1: z=0, x=-2, y=3, v=-2, lam=2; iteration 2: z=0, y=1, v=0.
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_DOUBLE_EQ(r.trace[0].objective, 6.0);
  EXPECT_DOUBLE_EQ(r.trace[0].eps_p, 1.0);
  EXPECT_DOUBLE_EQ(r.trace[0].eps_d, 0.0);
  EXPECT_EQ(r.status, SolverStatus::kSolved);
  EXPECT_DOUBLE_EQ(r.y[0], 1.0);
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
  EXPECT_DOUBLE_EQ(r.x[0], 2.0);
}

TEST(SolveDenseReference, Scalar) {
  EXPECT_DOUBLE_EQ(solve_dense_reference(scalar_problem(), SolverConfig{}).objective, 2.0);
}

TEST(SolvePrimal, DiagonalTraceConstraint) {
  Vector b(1);
  b << 1.0;
  const auto p = SdpProblem::from_data(
      make_data(Matrix::Identity(2, 2), {Matrix::Identity(2, 2)}, b));
  for (auto form : {SolverForm::kPrimal, SolverForm::kDual}) {
    const auto r = solve(prepare(p), form, tight());
    EXPECT_EQ(r.status, SolverStatus::kSolved);
    EXPECT_NEAR(r.objective, 1.0, 1e-4);
  }
}

TEST(Solvers, BlockArrowMatchesDenseReference) {
  const auto p = arrow_problem(4, 3, 2, 10, 2024);
  const auto dp = prepare(p);
  const auto cfg = tight();
  const auto primal = solve_primal(dp, cfg);
  const auto dual = solve_dual(dp, cfg);
  const auto dense = solve_dense_reference(p, cfg);
  ASSERT_EQ(primal.status, SolverStatus::kSolved);
  ASSERT_EQ(dual.status, SolverStatus::kSolved);
  ASSERT_EQ(dense.status, SolverStatus::kSolved);
  EXPECT_EQ(primal.cliques.count, 4);
  EXPECT_EQ(primal.cliques.max_size, 5);
  EXPECT_LE(rel_gap(primal.objective, dense.objective), 1e-3);
  EXPECT_LE(rel_gap(dual.objective, dense.objective), 1e-3);
  EXPECT_LE(std::abs(dual.objective - primal.objective), 1e-3 * (1 + std::abs(primal.objective)));
}

TEST(Solvers, CountersAndAffineInvariant) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 6; ++t) {
    const auto spec = fixtures::random_small_spec(rng);
    const auto dp = prepare(SdpProblem::from_data(generate_block_arrow(spec)));
    for (auto form : {SolverForm::kPrimal, SolverForm::kDual}) {
      double worst = 0.0;
      const auto r = solve(dp, form, tight(1e-4),
                           [&](const IterationRecord& rec) {
                             worst = std::max(worst, rec.affine_residual);
                           });
      EXPECT_EQ(r.counters.kkt_solves, r.iterations);
      EXPECT_EQ(r.counters.projections, static_cast<long>(r.iterations) * dp.num_cliques());
      EXPECT_EQ(r.counters.factorizations, 1);
      EXPECT_LE(worst, 1e-8);
      EXPECT_EQ(worst, r.max_affine_residual);
    }
    EXPECT_EQ(dp.factorizations(), 1);
  }
}

TEST(SolveDual, MultiplierIsGradientStep) {
  const auto dp = prepare(arrow_problem(3, 2, 2, 5, 9));
  SolverConfig one;
  one.max_iter = 1;
  auto state = DualState::zeros(dp);
  for (int it = 0; it < 25; ++it) {
    const Vector lam_old = state.lam;
    const double rho = one.rho;
    const auto r = solve_dual(dp, one, state);
    const DualState& next = *r.dual_state;
    const Vector literal = lam_old + rho * (next.zk - next.vk);
    EXPECT_LE((literal - next.lam).norm(), 1e-12 * (1 + literal.norm()));
    state = next;
  }
}

TEST(SolveDual, WarmStartReproducesRun) {
  const auto dp = prepare(arrow_problem(2, 3, 1, 4, 5));
  SolverConfig cfg;
  cfg.eps_tol = 1e-12;
  cfg.max_iter = 30;
  const auto full = solve_dual(dp, cfg);
  cfg.max_iter = 10;
  auto part = solve_dual(dp, cfg);
  cfg.max_iter = 20;
  part = solve_dual(dp, cfg, part.dual_state);
  EXPECT_EQ(part.iterations, 30);
  EXPECT_EQ(part.y, full.y);
}

TEST(SolveDenseReference, DensePatternBitwiseIdentical) {
  std::mt19937_64 rng(4);
  BlockArrowSpec spec{1, 4, 2, 5, 13};  // one block: the pattern is dense
  const auto p = SdpProblem::from_data(generate_block_arrow(spec));
  SolverConfig cfg = tight();
  cfg.record_trace = true;
  const auto dense = solve_dense_reference(p, cfg);
  const auto decomposed = solve_primal(prepare(p), cfg);
  ASSERT_EQ(dense.iterations, decomposed.iterations);
  EXPECT_EQ(dense.x, decomposed.x);
  for (std::size_t i = 0; i < dense.trace.size(); ++i) {
    EXPECT_EQ(dense.trace[i].objective, decomposed.trace[i].objective);
  }
}

TEST(SolveDenseReference, TooLarge) {
  BlockArrowSpec spec{201, 1, 1, 1, 0};
  try {
    solve_dense_reference(SdpProblem::from_data(generate_block_arrow(spec)), SolverConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooLarge);
  }
}

TEST(SolveDenseReference, OptimalityConditionsOnPlantedInstance) {
  std::mt19937_64 rng(6);
  const int n = 6, m = 4;
  std::vector<Matrix> A;
  Vector b(m), y0(m);
  Matrix C = Matrix::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    A.push_back(oracle::random_symmetric(n, rng));
    b[i] = A[i].trace();  // X0 = I
    y0[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
    C += y0[i] * A[i];
  }
  const Matrix G = oracle::random_symmetric(n, rng);
  C += G * G.transpose() + 0.1 * Matrix::Identity(n, n);
  const auto p = SdpProblem::from_data(make_data(C, A, b));

  const auto r = solve_dense_reference(p, tight(1e-7, 50000));
  ASSERT_EQ(r.status, SolverStatus::kSolved);
  const Matrix X = smat(r.x, p.pattern);
  Matrix Z = C;
  for (int i = 0; i < m; ++i) Z -= r.y[i] * A[i];
  const double scale = 1 + C.norm();
  for (int i = 0; i < m; ++i) EXPECT_NEAR((A[i].cwiseProduct(X)).sum(), b[i], 1e-4);
  EXPECT_GE(min_eigenvalue(X), -1e-4 * scale);
  EXPECT_GE(min_eigenvalue(Z), -1e-4 * scale);
  EXPECT_LE(std::abs(X.cwiseProduct(Z).sum()), 1e-4 * scale);
  EXPECT_NEAR(C.cwiseProduct(X).sum(), b.dot(r.y), 1e-4 * scale);
}

TEST(Solvers, ConvergeWellBelowTolerance) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 5; ++t) {
    const auto spec = fixtures::random_small_spec(rng);
    const auto dp = prepare(SdpProblem::from_data(generate_block_arrow(spec)));
    for (auto form : {SolverForm::kPrimal, SolverForm::kDual}) {
      const auto r = solve(dp, form, tight(1e-5, 5000));
      EXPECT_EQ(r.status, SolverStatus::kSolved) << to_string(form) << " l=" << spec.blocks
                                                 << " d=" << spec.block_size;
      EXPECT_LT(std::max(r.eps_p, r.eps_d), 1e-5);
    }
  }
}

TEST(Solvers, CliqueBlocksPsdAndAglerAssembly) {
  const auto dp = prepare(arrow_problem(4, 3, 2, 10, 99));
  const auto r = solve_dual(dp, tight());
  for (const auto& Zk : r.Z_blocks) EXPECT_GE(min_eigenvalue(Zk), -1e-8 * Zk.norm());
  const Matrix Z = assemble(dp, r.Z_blocks);
  EXPECT_GE(min_eigenvalue(Z), -1e-6 * Z.norm());
  // Z matches C - A^T y on the pattern up to the dual residual.
  const auto& prob = dp.problem();
  const Vector slack = prob.c - prob.A.transpose() * r.y;
  EXPECT_LE((smat(slack, prob.pattern) - Z).norm(), 1e-3 * (1 + Z.norm()));
}

TEST(Solvers, AdaptiveRhoSameObjective) {
  const auto dp = prepare(arrow_problem(3, 3, 2, 8, 17));
  auto cfg = tight();
  const auto fixed = solve_dual(dp, cfg);
  cfg.adaptive_rho = true;
  cfg.rho = 50.0;
  const auto adaptive = solve_dual(dp, cfg);
  ASSERT_EQ(adaptive.status, SolverStatus::kSolved);
  EXPECT_LE(rel_gap(adaptive.objective, fixed.objective), 1e-3);
  const auto primal = solve_primal(dp, cfg);
  EXPECT_LE(rel_gap(primal.objective, fixed.objective), 1e-3);
}

TEST(Solvers, ParallelProjectionsBitwiseIdentical) {
  const auto dp = prepare(arrow_problem(6, 3, 2, 8, 3));
  auto cfg = tight(1e-4);
  const auto serial = solve_dual(dp, cfg);
  cfg.parallel_projections = true;
  cfg.num_threads = 4;
  const auto parallel = solve_dual(dp, cfg);
  EXPECT_EQ(serial.iterations, parallel.iterations);
  EXPECT_EQ(serial.y, parallel.y);
}

TEST(Solvers, MaxIterAndNumericalError) {
  const auto dp = prepare(arrow_problem(2, 2, 1, 3, 8));
  SolverConfig cfg;
  cfg.max_iter = 1;
  EXPECT_EQ(solve_primal(dp, cfg).status, SolverStatus::kMaxIterReached);

  auto p = scalar_problem();
  p.c[0] = std::numeric_limits<double>::quiet_NaN();
  const auto r = solve_primal(prepare(p), SolverConfig{});
  EXPECT_EQ(r.status, SolverStatus::kNumericalError);
  EXPECT_FALSE(r.message.empty());
}
