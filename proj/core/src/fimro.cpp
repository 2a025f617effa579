#include "imro/fimro.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "imro/metrics.hpp"

namespace imro {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kGammaIdentityTol = 1e-12;
constexpr double kPhiBoundTol = 1e-9;
constexpr double kLambdaBoundTol = 1e-9;

}  // namespace

MetricBuilder default_metric_builder(double norm_upper) {
  return [norm_upper](const BpdnProblem& problem, double sigma,
                      const Vector& /*y*/, const FimroState& state) {
    const Vector v = state.x - state.x_prev;
    if (v.isZero(0.0)) {
      return RankOneMetric(sigma, Vector::Zero(state.x.size()));
    }
    RankOneMetric m = metric_1d(*problem.A, norm_upper, v);
    if (m.sigma() != sigma) {
      // The builder owns sigma consistency: metric_1d uses norm_upper^2,
      // which is what sigma is in every supported configuration.
      throw InvariantViolation("fimro: metric sigma differs from step sigma");
    }
    return m;
  };
}

FimroState fimro_init(const Vector& x0, double gamma0, double f_x0) {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) {
    throw std::invalid_argument("fimro_init: gamma0 must be positive");
  }
  FimroState s;
  s.x = x0;
  s.z = x0;
  s.gamma = gamma0;
  s.lambda_seq = 1.0;
  s.phi_bar = f_x0;
  s.k = 0;
  s.x_prev = x0;
  return s;
}

FimroState fimro_init(const BpdnProblem& problem, const Vector& x0,
                      double gamma0) {
  return fimro_init(x0, gamma0, objective(problem, x0));
}

FimroStepResult fimro_step_detail(const FimroState& state,
                                  const BpdnProblem& problem, double sigma,
                                  const MetricBuilder& u_builder,
                                  ProxMethod prox_method) {
  const LinearOperator& A = *problem.A;
  const double gamma = state.gamma;
  if (!(sigma > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("fimro_step: sigma and gamma must be positive");
  }

  // Positive root of sigma*alpha^2 + gamma*alpha - gamma = 0, written to
  // avoid cancellation.
  const double alpha =
      2.0 * gamma / (gamma + std::sqrt(gamma * gamma + 4.0 * sigma * gamma));
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvariantViolation("fimro_step: alpha = " + std::to_string(alpha) +
                             " outside (0,1)");
  }
  const double gamma_next = sigma * alpha * alpha;
  if (std::abs(gamma_next - (1.0 - alpha) * gamma) >
      kGammaIdentityTol * std::max(gamma, gamma_next)) {
    throw InvariantViolation("fimro_step: gamma recursion identity failed");
  }

  const Vector y = alpha * state.z + (1.0 - alpha) * state.x;
  const Vector ry = A.apply(y) - problem.b;
  const Vector grad_y = A.adjoint(ry);

  const RankOneMetric metric = u_builder(problem, sigma, y, state);
  const Vector xc = y - metric.apply_inverse(grad_y);
  ProxResult prox = prox_imro(metric, xc, problem.lambda, prox_method);

  const Vector g_h = metric.apply(y - prox.x);
  Vector residual_next = A.apply(prox.x) - problem.b;
  const double f_next =
      objective_from_residual(problem, residual_next, prox.x);

  FimroStepResult out;
  out.alpha = alpha;
  out.f_next = f_next;
  out.g_h_norm = g_h.norm();

  FimroState next;
  next.x = prox.x;
  next.z = state.z - (alpha / gamma_next) * g_h;
  next.gamma = gamma_next;
  next.lambda_seq = (1.0 - alpha) * state.lambda_seq;
  next.phi_bar = (1.0 - alpha) * state.phi_bar + alpha * f_next +
                 (alpha / (2.0 * sigma) -
                  alpha * alpha / (2.0 * gamma_next)) *
                     g_h.squaredNorm() +
                 alpha * g_h.dot(state.z - y);
  next.k = state.k + 1;
  next.x_prev = state.x;

  out.state = std::move(next);
  out.residual_next = std::move(residual_next);
  return out;
}

FimroState fimro_step(const FimroState& state, const BpdnProblem& problem,
                      double sigma, const MetricBuilder& u_builder) {
  return fimro_step_detail(state, problem, sigma, u_builder).state;
}

SolveResult fimro_solve(const BpdnProblem& problem, const FimroConfig& config) {
  return fimro_solve(problem, config, Vector::Zero(problem.cols()));
}

SolveResult fimro_solve(const BpdnProblem& problem, const FimroConfig& config,
                        const Vector& x0) {
  const LinearOperator& A = *problem.A;
  const Index n = A.cols();
  if (x0.size() != n) {
    throw DimensionMismatch("fimro_solve: x0", n, x0.size());
  }
  if (!(config.tol > 0.0)) {
    throw std::invalid_argument("fimro_solve: tol must be positive");
  }
  if (config.max_iters < 1 || config.max_ops < 1) {
    throw std::invalid_argument("fimro_solve: budgets must be positive");
  }

  const auto t_start = Clock::now();
  const std::uint64_t base_calls = A.total_calls();
  auto calls = [&] { return A.total_calls() - base_calls; };
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t_start).count();
  };

  const NormEstimate norm_est = config.norm ? *config.norm : operator_norm(A);
  const double norm_upper = norm_est.safe_upper();
  const double sigma = norm_upper * norm_upper;
  const double gamma0 = config.gamma0 > 0.0 ? config.gamma0 : sigma;
  const MetricBuilder builder = default_metric_builder(norm_upper);

  SolverTrace trace;
  trace.solver = "fimro";
  trace.norm_estimate = norm_est.value;
  trace.x0_note = x0.isZero(0.0) ? "zeros" : "custom";

  if (calls() + 2 > config.max_ops) {
    trace.status = Status::kOpBudget;
    return SolveResult{x0, std::move(trace)};
  }

  FimroState state;  // initialized below once F(x0) is known
  Vector residual = A.apply(x0) - problem.b;
  bool initialized = false;

  for (std::int64_t k = 0;; ++k) {
    const Vector& x = initialized ? state.x : x0;
    const double obj = objective_from_residual(problem, residual, x);
    if (!initialized) {
      state = fimro_init(x0, gamma0, obj);
      initialized = true;
    }
    const Vector grad = A.adjoint(residual);
    const double xi = subgradient_norm(problem, state.x, grad);

    TraceRecord rec;
    rec.iter = k;
    rec.a_calls = calls();
    rec.objective = obj;
    rec.subgrad_norm = xi;
    rec.seconds = elapsed();
    if (problem.x_star) rec.x_err = (state.x - *problem.x_star).norm();
    trace.records.push_back(rec);

    if (config.check_invariants) {
      if (!(obj <= state.phi_bar +
                       kPhiBoundTol * (1.0 + std::abs(state.phi_bar)))) {
        ++trace.phi_bound_violations;
      }
      const double denom = 2.0 * std::sqrt(sigma) +
                           static_cast<double>(k) * std::sqrt(gamma0);
      const double envelope = 4.0 * sigma / (denom * denom);
      if (!(state.lambda_seq <= envelope * (1.0 + kLambdaBoundTol))) {
        ++trace.lambda_bound_violations;
      }
      // gamma^0 lambda^k <= gamma^k, the inductive inequality.
      if (!(gamma0 * state.lambda_seq <=
            state.gamma * (1.0 + kLambdaBoundTol))) {
        ++trace.lambda_bound_violations;
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
    const std::uint64_t metric_cost = (state.x - state.x_prev).isZero(0.0) ? 0 : 2;
    // One step ahead: A y, grad at y, the metric, A x', next row's adjoint.
    if (calls() + metric_cost + 4 > config.max_ops) {
      trace.status = Status::kOpBudget;
      break;
    }

    FimroStepResult step =
        fimro_step_detail(state, problem, sigma, builder, config.prox_method);
    state = std::move(step.state);
    residual = std::move(step.residual_next);
  }

  Vector x_final = initialized ? state.x : x0;
  return SolveResult{std::move(x_final), std::move(trace)};
}

}  // namespace imro
