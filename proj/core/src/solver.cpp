#include "imro/solver.hpp"

#include <chrono>
#include <cmath>
#include <utility>

namespace imro {

namespace {

constexpr double kDescentTol = 1e-12;          // relative slack on F monotonicity
constexpr double kSufficientDecreaseTol = 1e-10;  // absolute slack

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BpdnProblem::BpdnProblem(std::shared_ptr<const LinearOperator> op, Vector rhs,
                         double lambda_, std::optional<Vector> reference)
    : A(std::move(op)),
      b(std::move(rhs)),
      lambda(lambda_),
      x_star(std::move(reference)) {
  if (!A) {
    throw std::invalid_argument("BpdnProblem: operator is required");
  }
  if (b.size() != A->rows()) {
    throw DimensionMismatch("BpdnProblem: b", A->rows(), b.size());
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("BpdnProblem: lambda must be finite and >= 0");
  }
  if (x_star && x_star->size() != A->cols()) {
    throw DimensionMismatch("BpdnProblem: x_star", A->cols(), x_star->size());
  }
}

double objective(const BpdnProblem& problem, const Vector& x) {
  const Vector r = problem.A->apply(x) - problem.b;
  return objective_from_residual(problem, r, x);
}

double objective_from_residual(const BpdnProblem& problem, const Vector& r,
                               const Vector& x) {
  return 0.5 * r.squaredNorm() + problem.lambda * x.lpNorm<1>();
}

Vector min_norm_subgradient(const BpdnProblem& problem, const Vector& x,
                            const Vector& grad_f) {
  if (grad_f.size() != x.size()) {
    throw DimensionMismatch("min_norm_subgradient: grad_f", x.size(),
                            grad_f.size());
  }
  const double lambda = problem.lambda;
  Vector xi(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      xi[i] = grad_f[i] + lambda;
    } else if (x[i] < 0.0) {
      xi[i] = grad_f[i] - lambda;
    } else {
      xi[i] = shrink(grad_f[i], lambda);
    }
  }
  return xi;
}

double subgradient_norm(const BpdnProblem& problem, const Vector& x,
                        const Vector& grad_f) {
  return min_norm_subgradient(problem, x, grad_f).norm();
}

std::string to_string(Status status) {
  switch (status) {
    case Status::kConverged:
      return "Converged";
    case Status::kIterBudget:
      return "IterBudget";
    case Status::kOpBudget:
      return "OpBudget";
  }
  return "Unknown";
}

SolveResult solve(const BpdnProblem& problem, const SolverConfig& config) {
  return solve(problem, config, Vector::Zero(problem.cols()));
}

SolveResult solve(const BpdnProblem& problem, const SolverConfig& config,
                  const Vector& x0) {
  const LinearOperator& A = *problem.A;
  const Index n = A.cols();
  if (x0.size() != n) {
    throw DimensionMismatch("solve: x0", n, x0.size());
  }
  if (!x0.allFinite()) {
    throw std::invalid_argument("solve: x0 must be finite");
  }
  if (!(config.tol > 0.0)) {
    throw std::invalid_argument("solve: tol must be positive");
  }
  if (config.max_iters < 1 || config.max_ops < 1) {
    throw std::invalid_argument("solve: budgets must be positive");
  }

  const auto t_start = Clock::now();
  const std::uint64_t base_calls = A.total_calls();
  auto calls = [&] { return A.total_calls() - base_calls; };

  const NormEstimate norm_est =
      config.norm ? *config.norm : operator_norm(A);
  const double norm_upper = norm_est.safe_upper();
  const double sigma_base = norm_upper * norm_upper;

  SolverTrace trace;
  trace.solver = config.variant == Variant::kImro1d ? "imro1d" : "imro2d";
  trace.norm_estimate = norm_est.value;
  trace.x0_note = x0.isZero(0.0) ? "zeros" : "custom";

  Vector x = x0;
  if (calls() + 2 > config.max_ops) {
    trace.status = Status::kOpBudget;
    return SolveResult{std::move(x), std::move(trace)};
  }

  Vector Ax = A.apply(x);
  Vector x_prev;

  // Step k-1 -> k bookkeeping for the invariant checks at row k.
  bool have_step_check = false;
  bool prev_majorizes = false;
  double prev_objective = 0.0;
  double prev_decrease = 0.0;  // ||g_H||^2 / (2 sigma) of the previous step

  for (std::int64_t k = 0;; ++k) {
    const Vector r = Ax - problem.b;
    const double obj = objective_from_residual(problem, r, x);
    const Vector grad = A.adjoint(r);
    const double xi = subgradient_norm(problem, x, grad);

    TraceRecord rec;
    rec.iter = k;
    rec.a_calls = calls();
    rec.objective = obj;
    rec.subgrad_norm = xi;
    rec.seconds = seconds_since(t_start);
    if (problem.x_star) rec.x_err = (x - *problem.x_star).norm();
    trace.records.push_back(rec);

    if (config.check_invariants && have_step_check) {
      if (!(obj <= prev_objective +
                       kDescentTol * (1.0 + std::abs(prev_objective)))) {
        ++trace.descent_violations;
      }
      if (prev_majorizes &&
          !(obj <= prev_objective - prev_decrease + kSufficientDecreaseTol)) {
        ++trace.sufficient_decrease_violations;
      }
    }

    const bool converged = config.objective_target
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
    const std::uint64_t metric_cost =
        k == 0 ? (config.first_step == FirstStep::kModelMatch ? 1 : 0) : 2;
    if (calls() + metric_cost + 2 > config.max_ops) {
      trace.status = Status::kOpBudget;
      break;
    }

    std::optional<RankOneMetric> metric;
    CurvatureSnapshot2D snapshot;
    bool have_snapshot = false;
    Vector v;
    const Vector* dir_ptr = nullptr;
    bool majorizes = false;

    if (k == 0) {
      if (config.first_step == FirstStep::kModelMatch && !grad.isZero(0.0)) {
        // Exact 1D model match along the first gradient (Rayleigh quotient).
        const Vector ag = A.apply(grad);
        const double gsq = grad.squaredNorm();
        double sig = ag.squaredNorm() / gsq;
        if (!(sig > 0.0)) sig = sigma_base;
        metric.emplace(sig, Vector::Zero(n));
      } else {
        metric.emplace(sigma_base, Vector::Zero(n));
        majorizes = true;
      }
    } else {
      v = x - x_prev;
      const bool stalled = v.isZero(0.0);
      if (stalled || (config.variant == Variant::kImro2d && grad.isZero(0.0))) {
        // No usable direction: plain prox-gradient step for this iteration.
        metric.emplace(sigma_base, Vector::Zero(n));
        majorizes = true;
      } else if (config.variant == Variant::kImro1d) {
        metric.emplace(metric_1d(A, norm_upper, v));
        dir_ptr = &v;
        majorizes = true;
      } else {
        metric.emplace(metric_2d(A, norm_upper, grad, v, nullptr, nullptr,
                                 &snapshot));
        have_snapshot = true;
        dir_ptr = &v;
      }
    }

    const Vector xc = x - metric->apply_inverse(grad);
    ProxResult prox =
        prox_imro(*metric, xc, problem.lambda, config.prox_method);

    if (config.observer) {
      IterationInfo info;
      info.k = k;
      info.x = &x;
      info.x_next = &prox.x;
      info.metric = &*metric;
      info.direction = dir_ptr;
      info.snapshot = have_snapshot ? &snapshot : nullptr;
      info.objective = obj;
      info.subgrad_norm = xi;
      config.observer(info);
    }

    if (config.check_invariants) {
      const Vector g_h = metric->apply(x - prox.x);
      prev_decrease = g_h.squaredNorm() / (2.0 * metric->sigma());
      prev_majorizes = majorizes;
      prev_objective = obj;
      have_step_check = true;
    } else {
      have_step_check = false;
    }

    x_prev = std::move(x);
    x = std::move(prox.x);
    Ax = A.apply(x);
  }

  return SolveResult{std::move(x), std::move(trace)};
}

}  // namespace imro
