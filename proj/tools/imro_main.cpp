// Command line front end: generate instances, run solvers under budgets,
// write traces, and benchmark solvers against each other.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imro/baselines.hpp"
#include "imro/fimro.hpp"
#include "imro/problems.hpp"
#include "imro/solver.hpp"
#include "imro/trace_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace imro;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct GenArgs {
  std::string family = "gaussian";
  Index m = 0;
  Index n = 0;
  std::int64_t k = 0;
  double lambda = 0.1;
  std::uint64_t seed = 0;
  std::string x_type = "gaussian";
  double decades = 3.0;
  double cond = 1000.0;
  double kernel_width = 4.0;
  double noise = -1.0;
  bool normalize_columns = false;
  std::int64_t oracle_iters = 0;
  std::string out;
};

struct SolveArgs {
  std::string problem;
  std::string solver = "imro2d";
  double tol = 1e-6;
  std::int64_t max_iters = 100000;
  std::uint64_t max_ops = std::numeric_limits<std::uint64_t>::max();
  std::string prox_method = "sorted";
  std::string trace;
  bool timing = false;
};

struct BenchArgs {
  std::vector<std::string> problems;
  std::vector<std::string> solvers = {"imro1d", "fimro", "ista", "fista"};
  double tol = 1e-6;
  double budget_multiplier = 5.0;
  std::string trace_dir;
};

ProxMethod parse_prox_method(const std::string& name) {
  return name == "median" ? ProxMethod::kMedian : ProxMethod::kSorted;
}

// Shared solver dispatch. The norm estimate is computed once per problem and
// handed to every run, so trace call counts cover the solver loop only.
SolveResult run_solver(const std::string& name, const BpdnProblem& problem,
                       const NormEstimate& norm, double tol,
                       std::int64_t max_iters, std::uint64_t max_ops,
                       ProxMethod prox_method,
                       std::optional<double> objective_target) {
  if (name == "imro1d" || name == "imro2d") {
    SolverConfig cfg;
    cfg.variant = name == "imro1d" ? Variant::kImro1d : Variant::kImro2d;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.max_ops = max_ops;
    cfg.prox_method = prox_method;
    cfg.norm = norm;
    cfg.objective_target = objective_target;
    return solve(problem, cfg);
  }
  if (name == "fimro") {
    FimroConfig cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.max_ops = max_ops;
    cfg.prox_method = prox_method;
    cfg.norm = norm;
    cfg.objective_target = objective_target;
    return fimro_solve(problem, cfg, Vector::Zero(problem.cols()));
  }
  if (name == "ista" || name == "fista") {
    FirstOrderConfig cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.max_ops = max_ops;
    cfg.norm = norm;
    cfg.objective_target = objective_target;
    return name == "ista" ? ista_solve(problem, cfg, Vector::Zero(problem.cols()))
                          : fista_solve(problem, cfg,
                                        Vector::Zero(problem.cols()));
  }
  throw std::runtime_error("unknown solver: " + name);
}

int cmd_gen(const GenArgs& args) {
  GenOptions opt;
  opt.sparsity = args.k;
  opt.x_type = signal_type_from_string(args.x_type);
  opt.decades = args.decades;
  opt.lambda = args.lambda;
  opt.seed = args.seed;
  opt.noise_level = args.noise;
  opt.normalize_columns = args.normalize_columns;

  ProblemBundle bundle = [&] {
    if (args.family == "gaussian") {
      return gen_gaussian(args.m, args.n, opt);
    }
    if (args.family == "orthonormal") {
      return gen_orthonormal(args.m, args.n, opt);
    }
    if (args.family == "conditioned") {
      return gen_conditioned(args.m, args.n, args.cond, opt);
    }
    if (args.family == "heaviside") {
      return gen_heaviside(args.n, opt);
    }
    if (args.family == "convolution") {
      return gen_convolution(args.n, args.kernel_width, opt);
    }
    throw std::runtime_error("unknown family: " + args.family);
  }();

  if (args.oracle_iters > 0) {
    ReferenceSolution ref =
        reference_minimizer(bundle.problem, args.oracle_iters, 1e-10);
    bundle.problem.x_star = ref.x;
    bundle.problem.A->reset_counts();
  }

  std::string out = args.out;
  if (out.empty()) {
    out = args.family + "_m" + std::to_string(bundle.meta.m) + "_n" +
          std::to_string(bundle.meta.n) + "_s" + std::to_string(args.seed);
  }
  const fs::path manifest = save_problem(bundle, out);
  std::printf("%s\n", manifest.string().c_str());
  return 0;
}

int cmd_solve(const SolveArgs& args) {
  ProblemBundle bundle = load_problem(args.problem);
  const BpdnProblem& problem = bundle.problem;
  const NormEstimate norm = operator_norm(*problem.A);
  problem.A->reset_counts();

  SolveResult res =
      run_solver(args.solver, problem, norm, args.tol, args.max_iters,
                 args.max_ops, parse_prox_method(args.prox_method), {});
  if (!args.trace.empty()) {
    write_trace_csv(args.trace, res.trace, args.timing);
  }
  if (res.trace.records.empty()) {
    // Budget too small for even one gradient evaluation.
    std::printf("%s, %s, -, 0, -, -\n", args.solver.c_str(),
                to_string(res.trace.status).c_str());
    return 0;
  }
  const TraceRecord& last = res.trace.final_record();
  std::printf("%s, %s, %lld, %llu, %.9e, %.3e\n", args.solver.c_str(),
              to_string(res.trace.status).c_str(),
              static_cast<long long>(last.iter),
              static_cast<unsigned long long>(last.a_calls), last.objective,
              last.subgrad_norm);
  return 0;
}

int cmd_bench(const BenchArgs& args) {
  struct Row {
    std::string instance;
    std::string solver;
    std::string status;
    std::string a_calls;
    std::string iters;
    std::string final_f;
    std::string x_err;
  };
  std::vector<Row> rows;

  auto fmt_err = [](const SolverTrace& trace) {
    const double err = trace.final_record().x_err;
    if (std::isnan(err)) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", err);
    return std::string(buf);
  };

  for (const std::string& path : args.problems) {
    ProblemBundle bundle = load_problem(path);
    const BpdnProblem& problem = bundle.problem;
    const std::string instance = fs::path(path).stem().string();
    const NormEstimate norm = operator_norm(*problem.A);
    problem.A->reset_counts();

    // Reference run: IMRO-2D to the subgradient tolerance fixes the target
    // objective every other solver must reach.
    SolveResult ref =
        run_solver("imro2d", problem, norm, args.tol,
                   std::numeric_limits<std::int64_t>::max() / 4,
                   std::numeric_limits<std::uint64_t>::max(),
                   ProxMethod::kSorted, {});
    const double f_target = ref.trace.final_record().objective;
    const std::int64_t ref_iters = ref.trace.final_record().iter;
    {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6e", f_target);
      rows.push_back({instance, "imro2d", to_string(ref.trace.status),
                      std::to_string(ref.trace.final_record().a_calls),
                      std::to_string(ref_iters), buf, fmt_err(ref.trace)});
    }
    if (!args.trace_dir.empty()) {
      fs::create_directories(args.trace_dir);
      write_trace_csv(fs::path(args.trace_dir) / (instance + ".imro2d.csv"),
                      ref.trace);
    }

    const std::int64_t iter_budget = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(args.budget_multiplier *
                                     static_cast<double>(ref_iters)));
    for (const std::string& solver : args.solvers) {
      Row row{instance, solver, "", "", "", "", ""};
      try {
        SolveResult res = run_solver(
            solver, problem, norm, args.tol, iter_budget,
            std::numeric_limits<std::uint64_t>::max(), ProxMethod::kSorted,
            f_target);
        if (res.trace.status == Status::kConverged) {
          row.status = to_string(res.trace.status);
          row.a_calls = std::to_string(res.trace.final_record().a_calls);
        } else {
          row.status = "DNC";
          row.a_calls = "DNC";
        }
        row.iters = std::to_string(res.trace.final_record().iter);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6e",
                      res.trace.final_record().objective);
        row.final_f = buf;
        row.x_err = fmt_err(res.trace);
        if (!args.trace_dir.empty()) {
          write_trace_csv(
              fs::path(args.trace_dir) / (instance + "." + solver + ".csv"),
              res.trace);
        }
      } catch (const std::exception& e) {
        row.status = "DNC";
        row.a_calls = "DNC";
        row.iters = "-";
        row.final_f = "-";
        row.x_err = "-";
        std::fprintf(stderr, "warning: %s on %s failed: %s\n", solver.c_str(),
                     instance.c_str(), e.what());
      }
      rows.push_back(row);
    }
  }

  std::printf("%-24s %-8s %-10s %10s %8s %14s %10s\n", "instance", "solver",
              "status", "a_calls", "iters", "final_F", "x_err");
  for (const Row& row : rows) {
    std::printf("%-24s %-8s %-10s %10s %8s %14s %10s\n", row.instance.c_str(),
                row.solver.c_str(), row.status.c_str(), row.a_calls.c_str(),
                row.iters.c_str(), row.final_f.c_str(), row.x_err.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMRO: matrix-free solvers for l1-regularized least squares"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a problem instance");
  gen_cmd->add_option("--family", gen.family, "instance family")
      ->check(CLI::IsMember({"gaussian", "orthonormal", "conditioned",
                             "heaviside", "convolution"}));
  gen_cmd->add_option("--m", gen.m, "row count (matrix families)");
  gen_cmd->add_option("--n", gen.n, "column count / signal length")
      ->required();
  gen_cmd->add_option("--k", gen.k, "nonzeros in the planted signal");
  gen_cmd->add_option("--lambda", gen.lambda, "regularization weight")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--x-type", gen.x_type, "signal entry type")
      ->check(CLI::IsMember({"gaussian", "dynamic"}));
  gen_cmd->add_option("--decades", gen.decades, "dynamic range in decades");
  gen_cmd->add_option("--cond", gen.cond,
                      "target condition number (conditioned family)");
  gen_cmd->add_option("--kernel-width", gen.kernel_width,
                      "blur width (convolution family)");
  gen_cmd->add_option("--noise", gen.noise,
                      "observation noise level (default scales with ||Ax||)");
  gen_cmd->add_flag("--normalize-columns", gen.normalize_columns,
                    "normalize the columns of dense A");
  gen_cmd->add_option("--oracle-iters", gen.oracle_iters,
                      "if > 0, attach a long-run FISTA reference solution");
  gen_cmd->add_option("--out", gen.out, "output path prefix");

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "run one solver on an instance");
  solve_cmd->add_option("--problem", solve_args.problem, "manifest path")
      ->required();
  solve_cmd->add_option("--solver", solve_args.solver, "solver name")
      ->check(CLI::IsMember({"imro1d", "imro2d", "fimro", "ista", "fista"}));
  solve_cmd->add_option("--tol", solve_args.tol,
                        "subgradient-norm termination threshold")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iters", solve_args.max_iters,
                        "iteration budget");
  solve_cmd->add_option("--max-ops", solve_args.max_ops, "A/A^t call budget");
  solve_cmd->add_option("--prox-method", solve_args.prox_method,
                        "breakpoint search variant")
      ->check(CLI::IsMember({"sorted", "median"}));
  solve_cmd->add_option("--trace", solve_args.trace, "trace CSV output path");
  solve_cmd->add_flag("--timing", solve_args.timing,
                      "record wall time in the trace (breaks byte determinism)");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "objective-matching comparison across solvers");
  bench_cmd->add_option("--problem", bench.problems, "manifest path(s)")
      ->required();
  bench_cmd->add_option("--solvers", bench.solvers, "solvers to compare")
      ->delimiter(',');
  bench_cmd->add_option("--tol", bench.tol, "reference run tolerance")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--budget-multiplier", bench.budget_multiplier,
                        "DNC iteration budget as a multiple of the "
                        "reference solver's iterations");
  bench_cmd->add_option("--trace-dir", bench.trace_dir,
                        "directory for per-run trace files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
