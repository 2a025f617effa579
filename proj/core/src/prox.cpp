#include "imro/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace imro {

namespace {

constexpr double kBreakpointEqTol = 1e-12;  // lhs == rhs declaration tolerance

// One of the two piecewise-linear terms a coordinate contributes to lhs(mu):
// value w*(mu - knee) on the active half-line, zero on the other side.
struct Hinge {
  double knee;
  double w;
  bool right;  // active for mu >= knee when true, mu <= knee otherwise
};

}  // namespace

double shrink(double y, double threshold) {
  if (y > threshold) return y - threshold;
  if (y < -threshold) return y + threshold;
  return 0.0;
}

Vector shrink(const Vector& y, double threshold) {
  if (threshold < 0.0) {
    throw std::invalid_argument("shrink: threshold must be nonnegative");
  }
  Vector out(y.size());
  for (Index i = 0; i < y.size(); ++i) out[i] = shrink(y[i], threshold);
  return out;
}

RankOneMetric::RankOneMetric(double sigma, Vector u)
    : sigma_(sigma), u_(std::move(u)), u_sq_(u_.squaredNorm()) {
  if (!std::isfinite(sigma_) || sigma_ <= 0.0) {
    throw std::invalid_argument("RankOneMetric: sigma must be positive");
  }
  if (!u_.allFinite()) {
    throw std::invalid_argument("RankOneMetric: u must be finite");
  }
  if (!(sigma_ > u_sq_)) {
    throw std::invalid_argument(
        "RankOneMetric: sigma must exceed ||u||^2 (sigma=" +
        std::to_string(sigma_) + ", ||u||^2=" + std::to_string(u_sq_) + ")");
  }
}

double RankOneMetric::quadratic_form(const Vector& x) const {
  if (x.size() != u_.size()) {
    throw DimensionMismatch("RankOneMetric::quadratic_form", u_.size(),
                            x.size());
  }
  const double ux = u_.dot(x);
  return sigma_ * x.squaredNorm() - ux * ux;
}

double RankOneMetric::norm(const Vector& x) const {
  return std::sqrt(std::max(quadratic_form(x), 0.0));
}

Vector RankOneMetric::apply(const Vector& x) const {
  if (x.size() != u_.size()) {
    throw DimensionMismatch("RankOneMetric::apply", u_.size(), x.size());
  }
  return sigma_ * x - u_ * u_.dot(x);
}

Vector RankOneMetric::apply_inverse(const Vector& g) const {
  if (g.size() != u_.size()) {
    throw DimensionMismatch("RankOneMetric::apply_inverse", u_.size(),
                            g.size());
  }
  if (u_sq_ == 0.0) return g / sigma_;
  return g / sigma_ - u_ * (u_.dot(g) / (sigma_ * (u_sq_ - sigma_)));
}

std::vector<Breakpoint> prox_breakpoints(const RankOneMetric& metric,
                                         const Vector& xc, double lambda) {
  const double t = lambda / metric.sigma();
  const Vector& u = metric.u();
  std::vector<Breakpoint> bps;
  bps.reserve(2 * static_cast<std::size_t>(u.size()));
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const int tag = static_cast<int>(i) + 1;
    bps.push_back({(t - xc[i]) / u[i], tag});
    bps.push_back({(-t - xc[i]) / u[i], -tag});
  }
  return bps;
}

double prox_lhs(const RankOneMetric& metric, const Vector& xc, double lambda,
                double mu) {
  const double sigma = metric.sigma();
  const double t = lambda / sigma;
  const Vector& u = metric.u();
  double val = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    val += u[i] * shrink(xc[i] + mu * u[i], t);
  }
  return val - sigma * mu;
}

namespace {

ProxResult finish(const RankOneMetric& metric, const Vector& xc, double lambda,
                  double mu, std::int64_t pieces) {
  const double sigma = metric.sigma();
  const double t = lambda / sigma;
  const Vector& u = metric.u();
  // One Newton correction with lhs and the piece slope evaluated fresh: on a
  // piecewise-linear function this lands on the exact root of the bracketed
  // piece, shedding the roundoff the sweep accumulated on the way here.
  if (!u.isZero(0.0)) {
    const double rhs = u.dot(xc);
    double lhs = 0.0;
    double quad = 0.0;
    for (Index i = 0; i < xc.size(); ++i) {
      if (u[i] == 0.0) continue;
      const double s = shrink(xc[i] + mu * u[i], t);
      lhs += u[i] * s;
      if (s != 0.0) quad += u[i] * u[i];
    }
    lhs -= sigma * mu;
    mu += (rhs - lhs) / (quad - sigma);  // slope strictly negative
  }
  Vector x(xc.size());
  for (Index i = 0; i < xc.size(); ++i) {
    x[i] = shrink(xc[i] + mu * u[i], t);
  }
  return ProxResult{std::move(x), mu, pieces};
}

ProxResult prox_sorted(const RankOneMetric& metric, const Vector& xc,
                       double lambda, ProxWork* work) {
  const double sigma = metric.sigma();
  const double t = lambda / sigma;
  const Vector& u = metric.u();
  const double rhs = u.dot(xc);
  const double eq_tol = kBreakpointEqTol * (1.0 + std::abs(rhs));

  std::vector<Breakpoint> bps = prox_breakpoints(metric, xc, lambda);
  if (bps.empty()) {
    return ProxResult{shrink(xc, t), 0.0, 0};
  }
  std::sort(bps.begin(), bps.end(), [&](const Breakpoint& a,
                                        const Breakpoint& b) {
    if (work != nullptr) ++work->comparisons;
    if (a.value != b.value) return a.value < b.value;
    return a.signed_index < b.signed_index;  // tie order fixed for determinism
  });

  // Strictly left of every breakpoint all tracked coordinates are nonzero, so
  // the lhs slope there is ||u||^2 - sigma.
  const double mu0 = bps.front().value - 1.0;
  double lhs = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    lhs += u[i] * shrink(xc[i] + mu0 * u[i], t);
    if (work != nullptr) ++work->evaluations;
  }
  lhs -= sigma * mu0;
  double slope_quad = metric.u_squared_norm();
  double slope = slope_quad - sigma;

  if (lhs <= rhs) {
    // The crossing lies on the unbounded leftmost piece.
    return finish(metric, xc, lambda, mu0 + (rhs - lhs) / slope, 0);
  }

  double mu = mu0;
  std::int64_t pieces = 0;
  for (const Breakpoint& bp : bps) {
    const double mu_plus = bp.value;
    const double lhs_plus = lhs + slope * (mu_plus - mu);
    ++pieces;
    if (work != nullptr) ++work->evaluations;
    if (std::abs(lhs_plus - rhs) <= eq_tol) {
      return finish(metric, xc, lambda, mu_plus, pieces);
    }
    if (lhs_plus < rhs) {
      // Bracketed: interpolate linearly on the current piece.
      const double denom = lhs - lhs_plus;
      const double mu_star =
          (rhs - lhs_plus) / denom * mu + (lhs - rhs) / denom * mu_plus;
      return finish(metric, xc, lambda, mu_star, pieces);
    }
    // Crossing this breakpoint toggles one coordinate in or out of the zero
    // set: entering drops u_i^2 from the slope, leaving restores it.
    const Index i = std::abs(bp.signed_index) - 1;
    const double w = u[i] * u[i];
    const bool upper = (u[i] > 0.0) == (bp.signed_index > 0);
    slope_quad += upper ? w : -w;
    slope = slope_quad - sigma;
    mu = mu_plus;
    lhs = lhs_plus;
  }
  // Right of every breakpoint: unbounded final piece, slope ||u||^2 - sigma.
  return finish(metric, xc, lambda, mu + (rhs - lhs) / slope, pieces);
}

ProxResult prox_median(const RankOneMetric& metric, const Vector& xc,
                       double lambda, ProxWork* work) {
  const double sigma = metric.sigma();
  const double t = lambda / sigma;
  const Vector& u = metric.u();
  const double rhs = u.dot(xc);
  const double eq_tol = kBreakpointEqTol * (1.0 + std::abs(rhs));

  // Decompose lhs(mu) + sigma*mu = sum_i u_i * shrink(xc_i + mu u_i, t) into
  // hinge terms u_i*(xc_i + mu u_i -+ t)^+ = w*(mu - knee) on a half-line:
  //   knee (t - xc_i)/u_i   active right of the knee iff u_i > 0
  //   knee (-t - xc_i)/u_i  active left of the knee iff u_i > 0
  std::vector<Hinge> items;
  items.reserve(2 * static_cast<std::size_t>(u.size()));
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const double w = u[i] * u[i];
    items.push_back({(t - xc[i]) / u[i], w, u[i] > 0.0});
    items.push_back({(-t - xc[i]) / u[i], w, u[i] < 0.0});
  }
  if (items.empty()) {
    return ProxResult{shrink(xc, t), 0.0, 0};
  }

  // Hinges whose knee left the active interval are folded into an affine
  // aggregate, so each round costs work proportional to the survivors only.
  double agg_slope = 0.0;
  double agg_const = 0.0;
  std::int64_t rounds = 0;
  double mu_star = 0.0;
  bool found = false;

  while (!items.empty()) {
    ++rounds;
    const std::size_t mid = items.size() / 2;
    std::nth_element(items.begin(), items.begin() + mid, items.end(),
                     [&](const Hinge& a, const Hinge& b) {
                       if (work != nullptr) ++work->comparisons;
                       return a.knee < b.knee;
                     });
    const double m = items[mid].knee;

    double val = (agg_slope - sigma) * m + agg_const;
    for (const Hinge& h : items) {
      if (work != nullptr) ++work->evaluations;
      if (h.right ? (m >= h.knee) : (m <= h.knee)) {
        val += h.w * (m - h.knee);
      }
    }

    if (std::abs(val - rhs) <= eq_tol) {
      mu_star = m;
      found = true;
      break;
    }
    const bool go_right = val > rhs;  // lhs still above rhs: mu* > m
    std::size_t kept = 0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      const Hinge& h = items[j];
      const bool keep = go_right ? (h.knee > m) : (h.knee < m);
      if (keep) {
        items[kept++] = h;
        continue;
      }
      if (work != nullptr) ++work->discarded;
      // Resolved: either fully active over the surviving interval (fold into
      // the aggregate) or identically zero there (drop).
      if (h.right == go_right) {
        agg_slope += h.w;
        agg_const -= h.w * h.knee;
      }
    }
    items.resize(kept);
  }

  if (!found) {
    mu_star = (rhs - agg_const) / (agg_slope - sigma);
  }
  return finish(metric, xc, lambda, mu_star, rounds);
}

}  // namespace

ProxResult prox_imro(const RankOneMetric& metric, const Vector& xc,
                     double lambda, ProxMethod method, ProxWork* work) {
  if (xc.size() != metric.dim()) {
    throw DimensionMismatch("prox_imro: xc", metric.dim(), xc.size());
  }
  if (!xc.allFinite()) {
    throw std::invalid_argument("prox_imro: xc must be finite");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("prox_imro: lambda must be finite and >= 0");
  }
  if (metric.u_squared_norm() == 0.0) {
    return ProxResult{shrink(xc, lambda / metric.sigma()), 0.0, 0};
  }
  return method == ProxMethod::kSorted ? prox_sorted(metric, xc, lambda, work)
                                       : prox_median(metric, xc, lambda, work);
}

double prox_model_value(const RankOneMetric& metric, const Vector& xc,
                        double lambda, const Vector& x) {
  return 0.5 * metric.quadratic_form(x - xc) +
         lambda * x.lpNorm<1>();
}

double prox_kkt_residual(const RankOneMetric& metric, const Vector& xc,
                         double lambda, const ProxResult& result) {
  const Vector h = metric.apply(result.x - xc);
  double res = 0.0;
  for (Index i = 0; i < h.size(); ++i) {
    double r;
    if (result.x[i] > 0.0) {
      r = h[i] + lambda;
    } else if (result.x[i] < 0.0) {
      r = h[i] - lambda;
    } else {
      // Best feasible subgradient choice at a zero coordinate.
      r = shrink(h[i], lambda);
    }
    res = std::max(res, std::abs(r));
  }
  return res;
}

}  // namespace imro
