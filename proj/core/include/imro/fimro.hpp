#pragma once

#include <functional>

#include "imro/solver.hpp"

namespace imro {

// State of the accelerated scheme. The estimate-sequence quadratic is
// phi^k(x) = phi_bar^k + (gamma^k / 2) ||x - z^k||^2 and lambda_seq tracks
// the contraction factor lambda^k (lambda^0 = 1, lambda^{k+1} =
// (1 - alpha^k) lambda^k), which drives the convergence bound.
struct FimroState {
  Vector x;
  Vector z;
  double gamma = 0.0;
  double lambda_seq = 1.0;
  double phi_bar = 0.0;
  std::int64_t k = 0;
  Vector x_prev;  // previous iterate, feeds the default direction choice
};

// Builds the metric centered at y^k. The default uses the 1D construction
// along x^k - x^{k-1} and falls back to sigma*I when that direction is zero
// (in particular at k = 0). sigma passed in is the global curvature bound.
using MetricBuilder = std::function<RankOneMetric(
    const BpdnProblem&, double sigma, const Vector& y, const FimroState&)>;

MetricBuilder default_metric_builder(double norm_upper);

// phi_bar^0 = F(x^0); the overload without f_x0 spends one apply on it.
FimroState fimro_init(const Vector& x0, double gamma0, double f_x0);
FimroState fimro_init(const BpdnProblem& problem, const Vector& x0,
                      double gamma0);

struct FimroStepResult {
  FimroState state;
  double alpha = 0.0;
  double f_next = 0.0;    // F(x^{k+1})
  Vector residual_next;   // A x^{k+1} - b, reusable by the caller
  double g_h_norm = 0.0;  // ||H(y^k - x^{k+1})||
};

// One accelerated step:
//   alpha solves sigma*alpha^2 = (1 - alpha) gamma   (root in (0,1))
//   y = alpha z + (1 - alpha) x
//   x' = scaled prox point of the metric centered at y
//   z' = z - (alpha / gamma') H(y - x')
// plus the phi_bar and lambda_seq recursions. Requires sigma >= ||A||^2 and
// gamma^0 >= ||A||^2 for the convergence guarantees.
FimroStepResult fimro_step_detail(const FimroState& state,
                                  const BpdnProblem& problem, double sigma,
                                  const MetricBuilder& u_builder,
                                  ProxMethod prox_method = ProxMethod::kSorted);
FimroState fimro_step(const FimroState& state, const BpdnProblem& problem,
                      double sigma, const MetricBuilder& u_builder);

struct FimroConfig {
  double tol = 1e-6;
  std::int64_t max_iters = 10000;
  std::uint64_t max_ops = std::numeric_limits<std::uint64_t>::max();
  ProxMethod prox_method = ProxMethod::kSorted;
  double gamma0 = -1.0;  // <= 0 means gamma0 = sigma (= the norm bound squared)
  std::optional<NormEstimate> norm;
  std::optional<double> objective_target;
  bool check_invariants = true;
};

// Full run with the same trace format as solve(). F need not decrease
// monotonically here, so no descent accounting is done.
SolveResult fimro_solve(const BpdnProblem& problem, const FimroConfig& config,
                        const Vector& x0);
SolveResult fimro_solve(const BpdnProblem& problem, const FimroConfig& config);

}  // namespace imro
