// chordal-sdp: command-line front end (solve, generate, bench, info).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chordal_sdp/admm.hpp"
#include "chordal_sdp/block_arrow.hpp"
#include "chordal_sdp/error.hpp"
#include "chordal_sdp/result_io.hpp"
#include "chordal_sdp/sdpa.hpp"

namespace {

using namespace chordal_sdp;

constexpr int kExitSolved = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIter = 2;

struct TableOneRow {
  int m, n, p, max_clique, min_clique;
};

// Reference statistics of the large SDPLIB problems.
const std::map<std::string, TableOneRow>& table_one() {
  static const std::map<std::string, TableOneRow> rows{
      {"maxG32", {2000, 2000, 1499, 60, 5}},
      {"maxG51", {1000, 1000, 674, 322, 6}},
      {"thetaG51", {6910, 1001, 674, 323, 7}},
      {"qpG51", {1000, 2000, 1675, 304, 1}},
  };
  return rows;
}

std::string instance_name(const std::string& path) {
  auto stem = std::filesystem::path(path).filename().string();
  if (auto pos = stem.find('.'); pos != std::string::npos) stem.resize(pos);
  return stem;
}

// Writes to the named file, or to stdout when the name is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct SolveOptions {
  std::string input;
  std::string form = "dual";
  double rho = 1.0;
  double tol = 1e-3;
  int max_iter = 2000;
  bool adaptive_rho = false;
  bool no_decompose = false;
  bool parallel = false;
  std::string out;
  std::string trace;
};

SolverForm parse_form(const std::string& s) {
  return s == "primal" ? SolverForm::kPrimal : SolverForm::kDual;
}

int cmd_solve(const SolveOptions& o) {
  const SdpData data = to_sdp_data(read_sdpa(o.input));
  const SdpProblem problem = SdpProblem::from_data(data);

  SolverConfig cfg;
  cfg.rho = o.rho;
  cfg.eps_tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.adaptive_rho = o.adaptive_rho;
  cfg.parallel_projections = o.parallel;
  cfg.record_trace = !o.trace.empty();
  cfg.validate();

  const SolverForm form = parse_form(o.form);
  const SolverResult r = o.no_decompose ? solve_dense_reference(problem, cfg, form)
                                        : solve(prepare(problem), form, cfg);

  ResultAnnotations notes;
  notes.input = o.input;
  notes.sdpa_objective = -r.objective;
  {
    Output out(o.out);
    write_result(out.stream(), r, ResultFormat::kJson, notes);
  }
  if (!o.trace.empty()) {
    Output trace(o.trace);
    write_result(trace.stream(), r, ResultFormat::kCsv);
  }
  std::cerr << to_string(r.status) << ": " << to_string(r.form) << " form, objective "
            << r.objective << " after " << r.iterations << " iterations (eps_p " << r.eps_p
            << ", eps_d " << r.eps_d << ")\n";
  switch (r.status) {
    case SolverStatus::kSolved: return kExitSolved;
    case SolverStatus::kMaxIterReached: return kExitMaxIter;
    case SolverStatus::kNumericalError: break;
  }
  std::cerr << "error: " << r.message << '\n';
  return kExitError;
}

struct GenerateOptions {
  BlockArrowSpec spec;
  std::string out;
};

int cmd_generate(const GenerateOptions& o) {
  const SdpData data = generate_block_arrow(o.spec);
  Output out(o.out);
  out.stream() << "\"block-arrow l=" << o.spec.blocks << " d=" << o.spec.block_size
               << " h=" << o.spec.arrow << " m=" << o.spec.constraints << " seed=" << o.spec.seed
               << '\n';
  write_sdpa(out.stream(), to_sdpa(data));
  return kExitSolved;
}

struct BenchOptions {
  std::string vary;
  std::vector<int> values;
  int reps = 5;
  BlockArrowSpec base{4, 4, 2, 10, 1};
  bool dense = false;
  double rho = 1.0;
  double tol = 1e-3;
  int max_iter = 2000;
  bool parallel = false;
  std::string out;
};

struct BenchCell {
  BlockArrowSpec spec;
  std::string solver;
  // filled by run_cell
  double setup_s = 0.0, iter = 0.0, total_s = 0.0, objective = 0.0;
  std::string status;
};

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void run_cell(BenchCell& cell, const BenchOptions& o) {
  SolverConfig cfg;
  cfg.rho = o.rho;
  cfg.eps_tol = o.tol;
  cfg.max_iter = o.max_iter;
  std::map<std::string, int> statuses;
  try {
    for (int rep = 0; rep < o.reps; ++rep) {
      BlockArrowSpec spec = cell.spec;
      spec.seed = cell.spec.seed + static_cast<std::uint64_t>(rep);
      const SdpProblem p = SdpProblem::from_data(generate_block_arrow(spec));
      SolverResult r;
      if (cell.solver == "dense") {
        r = solve_dense_reference(p, cfg, SolverForm::kDual);
      } else {
        const auto t0 = std::chrono::steady_clock::now();
        const DecomposedProblem dp = prepare(p);
        const double setup =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r = solve(dp, parse_form(cell.solver), cfg);
        r.timings.setup_s = setup;
      }
      cell.setup_s += r.timings.setup_s / o.reps;
      cell.iter += static_cast<double>(r.iterations) / o.reps;
      cell.total_s += (r.timings.setup_s + r.timings.iterate_s) / o.reps;
      cell.objective += r.objective / o.reps;
      ++statuses[to_string(r.status)];
    }
  } catch (const std::exception& e) {
    cell.setup_s = cell.iter = cell.total_s = cell.objective = std::nan("");
    cell.status = csv_safe(std::string("error: ") + e.what());
    return;
  }
  if (statuses.size() == 1 && statuses.begin()->first == "solved") {
    cell.status = "solved";
    return;
  }
  for (const auto& [name, count] : statuses) {
    if (!cell.status.empty()) cell.status += ' ';
    cell.status += name + " " + std::to_string(count) + "/" + std::to_string(o.reps);
  }
}

int cmd_bench(const BenchOptions& o) {
  std::vector<BenchCell> cells;
  std::vector<std::string> solvers{"primal", "dual"};
  if (o.dense) solvers.push_back("dense");
  for (int v : o.values) {
    BlockArrowSpec spec = o.base;
    if (o.vary == "m") spec.constraints = v;
    if (o.vary == "l") spec.blocks = v;
    if (o.vary == "d") spec.block_size = v;
    spec.validate();
    // Same instances for every solver in a cell row.
    spec.seed = o.base.seed * 1000003u + static_cast<std::uint64_t>(v) * 1009u;
    for (const auto& s : solvers) cells.push_back({spec, s});
  }

  const int count = static_cast<int>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) if (o.parallel)
  for (int i = 0; i < count; ++i) run_cell(cells[i], o);

  Output out(o.out);
  auto& os = out.stream();
  os << "case,params,solver,setup_s,iter,total_s,objective,status\n";
  for (const auto& c : cells) {
    os << "vary_" << o.vary << ",l=" << c.spec.blocks << " d=" << c.spec.block_size
       << " h=" << c.spec.arrow << " m=" << c.spec.constraints << ',' << c.solver << ','
       << format_double(c.setup_s) << ',' << format_double(c.iter) << ','
       << format_double(c.total_s) << ',' << format_double(c.objective) << ',' << c.status
       << '\n';
  }
  return kExitSolved;
}

int cmd_info(const std::string& input) {
  const SdpaFile file = read_sdpa(input);
  const SdpData data = to_sdp_data(file);
  const SdpProblem problem = SdpProblem::from_data(data);
  const DecomposedProblem dp = decompose(problem);
  const double n = data.n;
  const auto dense_entries = [&](const SparsityGraph& g) {
    return (n + 2.0 * static_cast<double>(g.num_edges())) / (n * n);
  };

  std::cout << "instance: " << instance_name(input) << '\n'
            << "n: " << data.n << '\n'
            << "m: " << data.m() << '\n'
            << "blocks: " << file.num_blocks() << '\n'
            << "pattern_nnz: " << problem.pattern.nnz() << '\n'
            << "density: " << dense_entries(dp.aggregate_graph()) << '\n'
            << "extended_density: " << dense_entries(dp.extended_graph()) << '\n'
            << "fill_edges: " << dp.extended_graph().num_edges() - dp.aggregate_graph().num_edges()
            << '\n'
            << "cliques_p: " << dp.num_cliques() << '\n'
            << "max_clique: " << dp.cliques().max_size() << '\n'
            << "min_clique: " << dp.cliques().min_size() << '\n'
            << "decompose_s: " << dp.decompose_seconds() << '\n';

  const auto it = table_one().find(instance_name(input));
  if (it != table_one().end()) {
    const auto& ref = it->second;
    std::cout << "reference_m: " << ref.m << '\n'
              << "reference_n: " << ref.n << '\n'
              << "reference_cliques_p: " << ref.p << '\n'
              << "reference_max_clique: " << ref.max_clique << '\n'
              << "reference_min_clique: " << ref.min_clique << '\n';
    if (ref.p != dp.num_cliques() || ref.max_clique != dp.cliques().max_size() ||
        ref.min_clique != dp.cliques().min_size()) {
      std::cerr << "note: clique statistics differ from the reference values; they depend on "
                   "the chordal extension heuristic\n";
    }
  }
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse SDP solver based on chordal decomposition and ADMM", "chordal-sdp"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an SDPA sparse (.dat-s) problem");
  solve_cmd->add_option("file", so.input, "Input .dat-s file")->required();
  solve_cmd->add_option("--form", so.form, "ADMM variant")
      ->check(CLI::IsMember({"primal", "dual"}))
      ->capture_default_str();
  solve_cmd->add_option("--rho", so.rho, "Penalty parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--tol", so.tol, "Termination tolerance on eps_p and eps_d")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--max-iter", so.max_iter, "Iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_flag("--adaptive-rho", so.adaptive_rho, "Residual balancing of rho");
  solve_cmd->add_flag("--no-decompose", so.no_decompose,
                      "Solve on the undecomposed cone (n <= 200)");
  solve_cmd->add_flag("--parallel", so.parallel, "Parallel clique projections");
  solve_cmd->add_option("--out", so.out, "JSON result file (default stdout)");
  solve_cmd->add_option("--trace", so.trace, "Per-iteration CSV trace file");

  GenerateOptions go;
  auto* gen_cmd = app.add_subcommand("generate", "Write a random block-arrow instance");
  gen_cmd->add_option("--blocks", go.spec.blocks, "Number of blocks l")->required();
  gen_cmd->add_option("--block-size", go.spec.block_size, "Block size d")->required();
  gen_cmd->add_option("--arrow", go.spec.arrow, "Arrow head size h")->required();
  gen_cmd->add_option("--num-constraints", go.spec.constraints, "Constraints m")->required();
  gen_cmd->add_option("--seed", go.spec.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--out", go.out, "Output .dat-s file (default stdout)");

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Timing sweep over block-arrow instances");
  bench_cmd->add_option("--vary", bo.vary, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"m", "l", "d"}));
  bench_cmd->add_option("--values", bo.values, "Values of the swept parameter")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--reps", bo.reps, "Random instances per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--blocks", bo.base.blocks, "Base l")->capture_default_str();
  bench_cmd->add_option("--block-size", bo.base.block_size, "Base d")->capture_default_str();
  bench_cmd->add_option("--arrow", bo.base.arrow, "Base h")->capture_default_str();
  bench_cmd->add_option("--num-constraints", bo.base.constraints, "Base m")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bo.base.seed, "Base RNG seed")->capture_default_str();
  bench_cmd->add_flag("--dense", bo.dense, "Also run the undecomposed solver");
  bench_cmd->add_option("--rho", bo.rho, "Penalty parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--tol", bo.tol, "Termination tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--max-iter", bo.max_iter, "Iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_flag("--parallel", bo.parallel, "Run cells concurrently");
  bench_cmd->add_option("--out", bo.out, "CSV output file (default stdout)");

  std::string info_input;
  auto* info_cmd = app.add_subcommand("info", "Report size and clique statistics");
  info_cmd->add_option("file", info_input, "Input .dat-s file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(so);
    if (*gen_cmd) {
      go.spec.validate();
      return cmd_generate(go);
    }
    if (*bench_cmd) return cmd_bench(bo);
    if (*info_cmd) return cmd_info(info_input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
