#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imro/linops.hpp"
#include "imro/metrics.hpp"
#include "imro/prox.hpp"
#include "imro/types.hpp"

namespace imro {

// min_x F(x) = 0.5*||Ax - b||^2 + lambda*||x||_1.
//
// lambda = 0 is accepted so the pure least-squares case can be driven through
// the same machinery (the CG equivalence study); generators and the CLI only
// produce lambda > 0.
struct BpdnProblem {
  std::shared_ptr<const LinearOperator> A;
  Vector b;
  double lambda = 0.0;
  std::optional<Vector> x_star;  // reference solution for residual reporting

  BpdnProblem(std::shared_ptr<const LinearOperator> op, Vector rhs,
              double lambda_, std::optional<Vector> reference = {});

  Index rows() const { return A->rows(); }
  Index cols() const { return A->cols(); }
};

// F(x); costs one apply.
double objective(const BpdnProblem& problem, const Vector& x);

// F given the already-computed residual r = Ax - b; costs nothing.
double objective_from_residual(const BpdnProblem& problem, const Vector& r,
                               const Vector& x);

// Minimal-norm subgradient of F at x, given grad_f = A^t(Ax - b). Zero extra
// operator calls. Where x_i = 0 the free subgradient coordinate is chosen to
// minimize |xi_i|.
Vector min_norm_subgradient(const BpdnProblem& problem, const Vector& x,
                            const Vector& grad_f);
double subgradient_norm(const BpdnProblem& problem, const Vector& x,
                        const Vector& grad_f);

enum class Variant { kImro1d, kImro2d };

// Metric for the very first step, where no previous direction exists.
//   kProxGradient: u = 0, sigma = ||A||^2 (a plain prox-gradient step).
//   kModelMatch:   u = 0, sigma = ||A grad||^2 / ||grad||^2, the exact
//                  1D model match along the gradient (one extra apply). This
//                  is the initialization under which IMRO-2D with lambda = 0
//                  reproduces linear CG.
enum class FirstStep { kProxGradient, kModelMatch };

enum class Status { kConverged, kIterBudget, kOpBudget };

std::string to_string(Status status);

struct TraceRecord {
  std::int64_t iter = 0;
  std::uint64_t a_calls = 0;  // cumulative A / A^t calls within the run
  double objective = 0.0;
  double subgrad_norm = 0.0;
  double seconds = 0.0;
  // ||x - x_star||; NaN when the problem carries no reference solution.
  double x_err = std::numeric_limits<double>::quiet_NaN();
};

// Everything the solver saw at one iteration, for observers. Pointers are
// null when the quantity does not exist at that iteration (direction and
// snapshot at k = 0, snapshot outside IMRO-2D).
struct IterationInfo {
  std::int64_t k = 0;
  const Vector* x = nullptr;       // iterate the step started from
  const Vector* x_next = nullptr;  // accepted next iterate
  const RankOneMetric* metric = nullptr;
  const Vector* direction = nullptr;  // v (1D) or d (2D), unnormalized
  const CurvatureSnapshot2D* snapshot = nullptr;
  double objective = 0.0;     // F at x
  double subgrad_norm = 0.0;  // ||xi|| at x
};

struct SolverConfig {
  Variant variant = Variant::kImro2d;
  double tol = 1e-6;  // threshold on ||xi||_2
  std::int64_t max_iters = 10000;
  std::uint64_t max_ops = std::numeric_limits<std::uint64_t>::max();
  ProxMethod prox_method = ProxMethod::kSorted;
  FirstStep first_step = FirstStep::kProxGradient;
  // Precomputed ||A|| estimate. When absent the solver runs power iteration
  // itself and those calls count against the run.
  std::optional<NormEstimate> norm;
  // When set, termination switches to F(x) <= objective_target (the
  // objective-matching benchmark rule) and tol is ignored.
  std::optional<double> objective_target;
  bool check_invariants = true;
  std::function<void(const IterationInfo&)> observer;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  Status status = Status::kIterBudget;
  std::string solver;
  std::string x0_note = "zeros";
  double norm_estimate = 0.0;  // ||A|| value the run used
  // Invariant bookkeeping (populated when check_invariants is on). Descent
  // holds by construction for IMRO-1D; for IMRO-2D violations are counted
  // here but are not an error. Not meaningful for FIMRO, which is not a
  // descent method.
  std::uint64_t descent_violations = 0;
  std::uint64_t sufficient_decrease_violations = 0;
  // FIMRO only: F(x^k) <= phi_bar^k and the lambda^k envelope bound.
  std::uint64_t phi_bound_violations = 0;
  std::uint64_t lambda_bound_violations = 0;

  // Records can be empty only when the op budget was too small to afford a
  // single gradient evaluation.
  const TraceRecord& final_record() const {
    if (records.empty()) {
      throw std::logic_error("SolverTrace: no records");
    }
    return records.back();
  }
};

struct SolveResult {
  Vector x;
  SolverTrace trace;
};

// Algorithm: iteration 0 takes the pure prox-gradient step (IMRO with u = 0);
// afterwards each iteration builds the metric from the previous direction
// (1D: v = x^k - x^{k-1}; 2D: the pair grad f^k, x^k - x^{k-1}), forms
// x^c = x^k - H^{-1} grad f^k, and accepts the scaled prox point
// unconditionally. Stops on ||xi|| <= tol or when a budget binds.
SolveResult solve(const BpdnProblem& problem, const SolverConfig& config,
                  const Vector& x0);
SolveResult solve(const BpdnProblem& problem, const SolverConfig& config);

}  // namespace imro
