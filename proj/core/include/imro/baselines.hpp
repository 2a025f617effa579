#pragma once

#include <vector>

#include "imro/solver.hpp"

namespace imro {

// One ISTA update x' = shrink(x - alpha * grad f(x), lambda * alpha).
// Costs one apply plus one adjoint. alpha must lie in (0, 1/L].
Vector ista_step(const BpdnProblem& problem, const Vector& x, double alpha);

struct FistaState {
  Vector x;
  Vector y;
  double t = 1.0;
};

// One FISTA update:
//   x' = shrink(y - alpha * grad f(y), lambda * alpha)
//   t' = (1 + sqrt(1 + 4 t^2)) / 2
//   y' = x' + ((t - 1) / t') (x' - x)
// Costs one apply plus one adjoint.
FistaState fista_step(const FistaState& state, const BpdnProblem& problem,
                      double alpha);

struct FirstOrderConfig {
  double tol = 1e-6;
  std::int64_t max_iters = 100000;
  std::uint64_t max_ops = std::numeric_limits<std::uint64_t>::max();
  std::optional<double> alpha;  // default 1/L with L the norm bound squared
  std::optional<NormEstimate> norm;
  std::optional<double> objective_target;
};

// Full ISTA / FISTA runs with the shared trace format. ISTA costs two calls
// per iteration. FISTA costs three in subgradient-termination mode (the
// momentum point and the iterate need separate gradients) and two in
// objective-target mode, where the subgradient column is left NaN.
SolveResult ista_solve(const BpdnProblem& problem,
                       const FirstOrderConfig& config, const Vector& x0);
SolveResult fista_solve(const BpdnProblem& problem,
                        const FirstOrderConfig& config, const Vector& x0);

// Conjugate gradient on the normal equations A^t A x = A^t b, i.e. linear CG
// for min 0.5 ||Ax - b||^2. Returns the iterate sequence starting with x0
// (so result[k] is the k-th iterate); stops early on breakdown (nonpositive
// direction curvature) or an exactly zero residual. Two calls per iteration.
std::vector<Vector> linear_cg(const LinearOperator& A, const Vector& b,
                              const Vector& x0, std::int64_t iters);

// Long-run FISTA reference minimizer, the in-house oracle for accuracy
// studies: tight subgradient tolerance, hard iteration cap.
struct ReferenceSolution {
  Vector x;
  double objective = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
};

ReferenceSolution reference_minimizer(const BpdnProblem& problem,
                                      std::int64_t max_iters = 100000,
                                      double tol = 1e-10);

}  // namespace imro
