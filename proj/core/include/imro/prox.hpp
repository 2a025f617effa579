#pragma once

#include <cstdint>
#include <vector>

#include "imro/types.hpp"

namespace imro {

// Componentwise soft shrinkage sgn(y_i) * max(|y_i| - threshold, 0).
double shrink(double y, double threshold);
Vector shrink(const Vector& y, double threshold);

// The pair (sigma, u) defining the metric H = sigma*I - u*u^t.
// Positive definiteness requires sigma > ||u||^2; the constructor rejects
// anything else.
class RankOneMetric {
 public:
  RankOneMetric(double sigma, Vector u);

  double sigma() const { return sigma_; }
  const Vector& u() const { return u_; }
  double u_squared_norm() const { return u_sq_; }
  Index dim() const { return u_.size(); }

  // x^t H x = sigma ||x||^2 - (u^t x)^2.
  double quadratic_form(const Vector& x) const;

  // Scaled norm ||x||_H = sqrt(x^t H x).
  double norm(const Vector& x) const;

  // H x.
  Vector apply(const Vector& x) const;

  // H^{-1} g via the closed form
  //   (sigma I - u u^t)^{-1} = (1/sigma) I - u u^t / (sigma (||u||^2 - sigma)).
  Vector apply_inverse(const Vector& g) const;

 private:
  double sigma_;
  Vector u_;
  double u_sq_;
};

// A candidate value of the multiplier mu at which one coordinate of the prox
// solution changes its sign regime. signed_index uses the 1-based convention
// of the breakpoint table: +i tags (lambda/sigma - xc_i)/u_i and -i tags
// (-lambda/sigma - xc_i)/u_i for coordinate i.
struct Breakpoint {
  double value;
  int signed_index;
};

enum class ProxMethod { kSorted, kMedian };

// Work counters for the complexity checks on the median variant.
struct ProxWork {
  std::uint64_t comparisons = 0;  // comparator invocations during selection
  std::uint64_t evaluations = 0;  // per-breakpoint arithmetic touches
  std::uint64_t discarded = 0;    // breakpoints eliminated by the recursion

  std::uint64_t total() const { return comparisons + evaluations + discarded; }
};

struct ProxResult {
  Vector x;
  double mu = 0.0;
  std::int64_t pieces_visited = 0;
};

// The breakpoints of the piecewise-linear equation in mu; empty when u = 0.
std::vector<Breakpoint> prox_breakpoints(const RankOneMetric& metric,
                                         const Vector& xc, double lambda);

// Left-hand side u^t x(mu) - sigma*mu of the scalar equation, with
// x(mu) = shrink(xc + mu*u, lambda/sigma). Piecewise linear, continuous and
// nonincreasing in mu. The solved equation is lhs(mu) = u^t xc.
double prox_lhs(const RankOneMetric& metric, const Vector& xc, double lambda,
                double mu);

// Scaled proximal step: x = argmin 0.5*||x - xc||_H^2 + lambda*||x||_1 and
// the multiplier mu it corresponds to. kSorted sweeps the sorted breakpoints
// with incremental slope updates (O(n log n)); kMedian narrows the bracketing
// interval by repeated median selection (O(n)).
//
// u = 0 degenerates to plain shrinkage with mu = 0. lambda = 0 is allowed;
// the threshold is then zero and the step is the exact metric Newton step.
ProxResult prox_imro(const RankOneMetric& metric, const Vector& xc,
                     double lambda, ProxMethod method = ProxMethod::kSorted,
                     ProxWork* work = nullptr);

// 0.5*||x - xc||_H^2 + lambda*||x||_1, the objective prox_imro minimizes.
double prox_model_value(const RankOneMetric& metric, const Vector& xc,
                        double lambda, const Vector& x);

// Sup-norm residual of the stationarity system H(x - xc) + lambda*xi = 0,
// with xi the subgradient selection induced by the returned mu. A correct
// solution keeps this at roundoff scale relative to sigma*||xc|| + lambda.
double prox_kkt_residual(const RankOneMetric& metric, const Vector& xc,
                         double lambda, const ProxResult& result);

}  // namespace imro
