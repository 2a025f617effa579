#pragma once

#include <atomic>
#include <cstdint>
#include <memory>

#include "imro/types.hpp"

namespace imro {

// Matrix-free linear map x -> Ax with adjoint y -> A^t y.
//
// Operators are immutable after construction except for the call counters,
// which tick atomically so that concurrent applies from a benchmark harness
// stay countable. apply/adjoint keep const signatures; the counters are the
// only interior-mutable state.
class LinearOperator {
 public:
  LinearOperator(Index rows, Index cols);
  virtual ~LinearOperator() = default;

  LinearOperator(const LinearOperator&) = delete;
  LinearOperator& operator=(const LinearOperator&) = delete;

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  // Ax. Counts one apply. Throws DimensionMismatch if x has wrong length.
  Vector apply(const Vector& x) const;

  // A^t y. Counts one adjoint.
  Vector adjoint(const Vector& y) const;

  std::uint64_t apply_count() const {
    return applies_.load(std::memory_order_relaxed);
  }
  std::uint64_t adjoint_count() const {
    return adjoints_.load(std::memory_order_relaxed);
  }
  // Combined A / A^t call count, the uniform cost metric across solvers.
  std::uint64_t total_calls() const { return apply_count() + adjoint_count(); }

  void reset_counts() const;

 protected:
  virtual Vector do_apply(const Vector& x) const = 0;
  virtual Vector do_adjoint(const Vector& y) const = 0;

 private:
  Index rows_;
  Index cols_;
  mutable std::atomic<std::uint64_t> applies_{0};
  mutable std::atomic<std::uint64_t> adjoints_{0};
};

// Explicitly stored m x n matrix.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Matrix entries);

  const Matrix& matrix() const { return entries_; }

 protected:
  Vector do_apply(const Vector& x) const override;
  Vector do_adjoint(const Vector& y) const override;

 private:
  Matrix entries_;
};

// Lower-triangular all-ones map: (Ax)_i = sum_{j<=i} x_j, i.e. a cumulative
// sum. The adjoint is the reverse cumulative sum. Runs in O(n) without
// materializing the matrix.
class HeavisideOperator final : public LinearOperator {
 public:
  explicit HeavisideOperator(Index n);

 protected:
  Vector do_apply(const Vector& x) const override;
  Vector do_adjoint(const Vector& y) const override;
};

// Circular convolution with a fixed kernel, (Ax)_i = sum_j k_j x_{(i-j) mod n}.
// The adjoint is correlation, i.e. convolution with the index-reversed kernel.
// Evaluation is direct O(n^2), fine at the scales this library targets.
class ConvolutionOperator final : public LinearOperator {
 public:
  explicit ConvolutionOperator(Vector kernel);

  const Vector& kernel() const { return kernel_; }

 protected:
  Vector do_apply(const Vector& x) const override;
  Vector do_adjoint(const Vector& y) const override;

 private:
  Vector kernel_;
};

// Result of the power-iteration spectral norm estimate.
struct NormEstimate {
  double value = 0.0;    // estimate of ||A|| (largest singular value)
  bool converged = true; // false when max_iter ran out before tol
  int iterations = 0;
  double tol = 0.0;

  // Inflated estimate for places where underestimating ||A|| would be unsafe
  // (sigma = ||A||^2 must dominate A^t A for the 1D metric).
  double safe_upper() const { return value * (1.0 + 10.0 * tol); }
};

// Estimates ||A|| by power iteration on A^t A from a seeded random start.
// Each iteration costs one apply plus one adjoint, ticking the operator's
// counters. Stops when the Rayleigh estimate changes by less than tol
// relatively, or flags converged=false after max_iter.
NormEstimate operator_norm(const LinearOperator& op, double tol = 1e-8,
                           int max_iter = 500,
                           std::uint64_t seed = 20250419u);

}  // namespace imro
