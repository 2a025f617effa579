#include "imro/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

namespace imro {

namespace {

using Clock = std::chrono::steady_clock;

struct RunClock {
  Clock::time_point start = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

}  // namespace

Vector ista_step(const BpdnProblem& problem, const Vector& x, double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("ista_step: alpha must be positive");
  }
  const Vector r = problem.A->apply(x) - problem.b;
  const Vector grad = problem.A->adjoint(r);
  return shrink(x - alpha * grad, problem.lambda * alpha);
}

FistaState fista_step(const FistaState& state, const BpdnProblem& problem,
                      double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("fista_step: alpha must be positive");
  }
  const Vector r = problem.A->apply(state.y) - problem.b;
  const Vector grad = problem.A->adjoint(r);
  FistaState next;
  next.x = shrink(state.y - alpha * grad, problem.lambda * alpha);
  next.t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.t * state.t));
  next.y = next.x + ((state.t - 1.0) / next.t) * (next.x - state.x);
  return next;
}

namespace {

SolveResult first_order_solve(const BpdnProblem& problem,
                              const FirstOrderConfig& config, const Vector& x0,
                              bool accelerated) {
  const LinearOperator& A = *problem.A;
  const Index n = A.cols();
  if (x0.size() != n) {
    throw DimensionMismatch("first-order solve: x0", n, x0.size());
  }
  if (!(config.tol > 0.0)) {
    throw std::invalid_argument("first-order solve: tol must be positive");
  }
  if (config.max_iters < 1 || config.max_ops < 1) {
    throw std::invalid_argument("first-order solve: budgets must be positive");
  }

  RunClock clock;
  const std::uint64_t base_calls = A.total_calls();
  auto calls = [&] { return A.total_calls() - base_calls; };

  const NormEstimate norm_est = config.norm ? *config.norm : operator_norm(A);
  const double lip = norm_est.safe_upper() * norm_est.safe_upper();
  const double alpha = config.alpha ? *config.alpha : 1.0 / lip;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("first-order solve: bad step size");
  }
  const bool objective_mode = config.objective_target.has_value();

  SolverTrace trace;
  trace.solver = accelerated ? "fista" : "ista";
  trace.norm_estimate = norm_est.value;
  trace.x0_note = x0.isZero(0.0) ? "zeros" : "custom";

  Vector x = x0;
  if (calls() + 2 > config.max_ops) {
    trace.status = Status::kOpBudget;
    return SolveResult{std::move(x), std::move(trace)};
  }
  Vector Ax = A.apply(x);
  Vector y = x;
  Vector Ay = Ax;
  double t = 1.0;

  for (std::int64_t k = 0;; ++k) {
    const Vector r = Ax - problem.b;
    const double obj = objective_from_residual(problem, r, x);
    Vector grad_x;
    double xi = std::numeric_limits<double>::quiet_NaN();
    if (!objective_mode || !accelerated) {
      // ISTA reuses this gradient for its step; FISTA pays one extra adjoint
      // for it, which objective-target mode skips.
      grad_x = A.adjoint(r);
      xi = subgradient_norm(problem, x, grad_x);
    }

    TraceRecord rec;
    rec.iter = k;
    rec.a_calls = calls();
    rec.objective = obj;
    rec.subgrad_norm = xi;
    rec.seconds = clock.elapsed();
    if (problem.x_star) rec.x_err = (x - *problem.x_star).norm();
    trace.records.push_back(rec);

    const bool converged = objective_mode
                               ? (obj <= *config.objective_target)
                               : (xi <= config.tol);
    if (converged) {
      trace.status = Status::kConverged;
      break;
    }
    if (k >= config.max_iters) {
      trace.status = Status::kIterBudget;
      break;
    }
    const std::uint64_t per_iter =
        accelerated ? (objective_mode ? 2 : 3) : 2;
    if (calls() + per_iter > config.max_ops) {
      trace.status = Status::kOpBudget;
      break;
    }

    if (!accelerated) {
      x = shrink(x - alpha * grad_x, problem.lambda * alpha);
      Ax = A.apply(x);
    } else {
      const Vector grad_y = A.adjoint(Ay - problem.b);
      Vector x_next = shrink(y - alpha * grad_y, problem.lambda * alpha);
      Vector Ax_next = A.apply(x_next);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double momentum = (t - 1.0) / t_next;
      y = x_next + momentum * (x_next - x);
      Ay = Ax_next + momentum * (Ax_next - Ax);
      x = std::move(x_next);
      Ax = std::move(Ax_next);
      t = t_next;
    }
  }

  return SolveResult{std::move(x), std::move(trace)};
}

}  // namespace

SolveResult ista_solve(const BpdnProblem& problem,
                       const FirstOrderConfig& config, const Vector& x0) {
  return first_order_solve(problem, config, x0, false);
}

SolveResult fista_solve(const BpdnProblem& problem,
                        const FirstOrderConfig& config, const Vector& x0) {
  return first_order_solve(problem, config, x0, true);
}

std::vector<Vector> linear_cg(const LinearOperator& A, const Vector& b,
                              const Vector& x0, std::int64_t iters) {
  if (x0.size() != A.cols()) {
    throw DimensionMismatch("linear_cg: x0", A.cols(), x0.size());
  }
  if (b.size() != A.rows()) {
    throw DimensionMismatch("linear_cg: b", A.rows(), b.size());
  }
  std::vector<Vector> iterates;
  iterates.reserve(static_cast<std::size_t>(iters) + 1);
  Vector x = x0;
  iterates.push_back(x);

  Vector s = A.adjoint(b - A.apply(x));  // negative gradient of 0.5||Ax-b||^2
  Vector p = s;
  double s_sq = s.squaredNorm();

  for (std::int64_t k = 0; k < iters; ++k) {
    if (s_sq == 0.0) break;
    const Vector ap = A.apply(p);
    const Vector q = A.adjoint(ap);
    const double curvature = p.dot(q);
    if (!(curvature > 0.0)) break;  // breakdown: return the prefix
    const double step = s_sq / curvature;
    x += step * p;
    iterates.push_back(x);
    s -= step * q;
    const double s_sq_next = s.squaredNorm();
    p = s + (s_sq_next / s_sq) * p;
    s_sq = s_sq_next;
  }
  return iterates;
}

ReferenceSolution reference_minimizer(const BpdnProblem& problem,
                                      std::int64_t max_iters, double tol) {
  FirstOrderConfig config;
  config.tol = tol;
  config.max_iters = max_iters;
  SolveResult run = fista_solve(problem, config, Vector::Zero(problem.cols()));
  ReferenceSolution ref;
  ref.x = std::move(run.x);
  ref.objective = run.trace.final_record().objective;
  ref.converged = run.trace.status == Status::kConverged;
  ref.iterations = run.trace.final_record().iter;
  return ref;
}

}  // namespace imro
