#include "imro/linops.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace imro {

LinearOperator::LinearOperator(Index rows, Index cols)
    : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("LinearOperator: shape must be at least 1x1");
  }
}

Vector LinearOperator::apply(const Vector& x) const {
  if (x.size() != cols_) {
    throw DimensionMismatch("apply: input", cols_, x.size());
  }
  applies_.fetch_add(1, std::memory_order_relaxed);
  return do_apply(x);
}

Vector LinearOperator::adjoint(const Vector& y) const {
  if (y.size() != rows_) {
    throw DimensionMismatch("adjoint: input", rows_, y.size());
  }
  adjoints_.fetch_add(1, std::memory_order_relaxed);
  return do_adjoint(y);
}

void LinearOperator::reset_counts() const {
  applies_.store(0, std::memory_order_relaxed);
  adjoints_.store(0, std::memory_order_relaxed);
}

DenseOperator::DenseOperator(Matrix entries)
    : LinearOperator(entries.rows(), entries.cols()),
      entries_(std::move(entries)) {}

Vector DenseOperator::do_apply(const Vector& x) const { return entries_ * x; }

Vector DenseOperator::do_adjoint(const Vector& y) const {
  return entries_.transpose() * y;
}

HeavisideOperator::HeavisideOperator(Index n) : LinearOperator(n, n) {}

Vector HeavisideOperator::do_apply(const Vector& x) const {
  Vector out(x.size());
  double acc = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    acc += x[i];
    out[i] = acc;
  }
  return out;
}

Vector HeavisideOperator::do_adjoint(const Vector& y) const {
  Vector out(y.size());
  double acc = 0.0;
  for (Index i = y.size() - 1; i >= 0; --i) {
    acc += y[i];
    out[i] = acc;
  }
  return out;
}

ConvolutionOperator::ConvolutionOperator(Vector kernel)
    : LinearOperator(kernel.size(), kernel.size()),
      kernel_(std::move(kernel)) {}

Vector ConvolutionOperator::do_apply(const Vector& x) const {
  const Index n = kernel_.size();
  Vector out = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    const double kj = kernel_[j];
    if (kj == 0.0) continue;
    for (Index i = 0; i < n; ++i) {
      Index src = i - j;
      if (src < 0) src += n;
      out[i] += kj * x[src];
    }
  }
  return out;
}

Vector ConvolutionOperator::do_adjoint(const Vector& y) const {
  const Index n = kernel_.size();
  Vector out = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    const double kj = kernel_[j];
    if (kj == 0.0) continue;
    for (Index i = 0; i < n; ++i) {
      Index src = i + j;
      if (src >= n) src -= n;
      out[i] += kj * y[src];
    }
  }
  return out;
}

NormEstimate operator_norm(const LinearOperator& op, double tol, int max_iter,
                           std::uint64_t seed) {
  if (tol <= 0.0) {
    throw std::invalid_argument("operator_norm: tol must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector w(op.cols());
  for (Index i = 0; i < w.size(); ++i) w[i] = gauss(rng);
  double wn = w.norm();
  if (wn == 0.0) {
    w.setConstant(1.0);
    wn = w.norm();
  }
  w /= wn;

  NormEstimate est;
  est.tol = tol;
  double prev = 0.0;
  double prev_step = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector z = op.adjoint(op.apply(w));
    // Rayleigh quotient w^t A^t A w = ||Aw||^2 for the current unit w.
    const double lambda = w.dot(z);
    est.iterations = it + 1;
    est.value = std::sqrt(std::max(lambda, 0.0));
    const double zn = z.norm();
    if (zn == 0.0) {
      // A w = 0 for a random w: treat as (numerically) the zero operator.
      est.value = 0.0;
      est.converged = true;
      return est;
    }
    if (it > 0) {
      // The Rayleigh estimates climb geometrically; the remaining error is
      // about step * ratio / (1 - ratio), not the last step alone. Stopping
      // on the raw step would quit far from lambda_max when the spectral gap
      // is small.
      const double step = lambda - prev;
      if (step <= 0.0) {
        est.converged = true;
        return est;
      }
      double tail = step;
      if (it > 1 && prev_step > 0.0 && step < prev_step) {
        const double ratio = step / prev_step;
        tail = step * ratio / (1.0 - ratio);
      }
      if (tail <= tol * std::abs(lambda)) {
        est.converged = true;
        return est;
      }
      prev_step = step;
    }
    prev = lambda;
    w = z / zn;
  }
  est.converged = false;
  return est;
}

}  // namespace imro
