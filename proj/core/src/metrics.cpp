#include "imro/metrics.hpp"

#include <cmath>
#include <string>

namespace imro {

namespace {

constexpr double kEpsSingRel = 1e-10;  // 1D dominant-vector test, times sigma
constexpr double kEpsDegenerate = 1e-12;  // 2D parallel guard on eta1, eta3
constexpr double kEpsBumpRel = 1e-8;      // sigma bump in the fallback
constexpr double kClaimTol = 1e-9;        // validity assertions, normalized

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

RankOneMetric metric_1d(const LinearOperator& A, double norm_a,
                        const Vector& v) {
  if (v.size() != A.cols()) {
    throw DimensionMismatch("metric_1d: v", A.cols(), v.size());
  }
  const double vn = v.norm();
  if (vn == 0.0) {
    throw std::invalid_argument(
        "metric_1d: v must be nonzero (caller supplies a fallback direction)");
  }
  if (!(norm_a >= 0.0) || !std::isfinite(norm_a)) {
    throw std::invalid_argument("metric_1d: norm_a must be finite and >= 0");
  }
  const Vector v_unit = v / vn;
  const double sigma = norm_a * norm_a;
  const Vector av = A.apply(v_unit);
  const Vector w = A.adjoint(av);  // A^t A v
  const double av_sq = av.squaredNorm();
  const double gap = sigma - av_sq;
  if (gap <= kEpsSingRel * sigma) {
    // v is (numerically) a dominant singular vector: H = sigma I suffices.
    return RankOneMetric(sigma, Vector::Zero(v.size()));
  }
  Vector u = (sigma * v_unit - w) / std::sqrt(gap);
  return RankOneMetric(sigma, std::move(u));
}

RankOneMetric metric_2d(const LinearOperator& A, double norm_a,
                        const Vector& grad, const Vector& dir,
                        const Vector* image_grad, const Vector* image_dir,
                        CurvatureSnapshot2D* snapshot) {
  if (grad.size() != A.cols()) {
    throw DimensionMismatch("metric_2d: grad", A.cols(), grad.size());
  }
  if (dir.size() != A.cols()) {
    throw DimensionMismatch("metric_2d: dir", A.cols(), dir.size());
  }
  const double gn = grad.norm();
  const double dn = dir.norm();
  if (gn == 0.0 || dn == 0.0) {
    throw std::invalid_argument("metric_2d: grad and dir must be nonzero");
  }
  const Vector g = grad / gn;
  const Vector d = dir / dn;
  const Vector ag = (image_grad != nullptr) ? Vector(*image_grad / gn)
                                            : A.apply(g);
  const Vector ad = (image_dir != nullptr) ? Vector(*image_dir / dn)
                                           : A.apply(d);

  const double eps = g.dot(d);
  const double s11 = ag.squaredNorm();
  const double s12 = ag.dot(ad);
  const double s22 = ad.squaredNorm();

  // The construction is scale covariant: S -> S/c maps sigma -> sigma/c and
  // u -> u/sqrt(c). Normalizing keeps the degeneracy guards dimensionless.
  const double scale = std::max(std::max(s11, s22), 0.0);

  CurvatureSnapshot2D snap;
  snap.eps = eps;
  snap.scale = scale;

  auto fall_back = [&]() {
    snap.degenerate = true;
    const double sigma_base = norm_a * norm_a;
    const double sigma = sigma_base * (1.0 + kEpsBumpRel);
    // 1D construction along grad against the bumped sigma.
    const Vector w = A.adjoint(ag);  // A^t A g
    const double gap = sigma - s11;
    RankOneMetric metric =
        (gap <= kEpsSingRel * sigma)
            ? RankOneMetric(sigma, Vector::Zero(grad.size()))
            : RankOneMetric(sigma, Vector((sigma * g - w) / std::sqrt(gap)));
    if (snapshot != nullptr) *snapshot = snap;
    return metric;
  };

  if (scale <= 0.0) {
    // A vanishes on the whole plane; any multiple of I matches.
    return fall_back();
  }

  const double n11 = s11 / scale;
  const double n12 = s12 / scale;
  const double n22 = s22 / scale;
  snap.S << n11, n12, n12, n22;

  const double eta1 = 1.0 - eps * eps;
  const double eta2 = -n11 - n22 + 2.0 * eps * n12;
  const double eta3 = n11 * n22 - n12 * n12;
  snap.eta1 = eta1;
  snap.eta2 = eta2;
  snap.eta3 = eta3;

  if (eta1 <= kEpsDegenerate || eta3 <= kEpsDegenerate) {
    // Happens only when grad and dir are (numerically) parallel.
    return fall_back();
  }

  double disc = eta2 * eta2 - 4.0 * eta1 * eta3;
  snap.discriminant = disc;
  if (disc < -kClaimTol) {
    throw InvariantViolation("metric_2d: negative discriminant " +
                             std::to_string(disc));
  }
  disc = std::max(disc, 0.0);
  const double root = std::sqrt(disc);
  // Larger root of the quadratic; the smaller one can undercut S11, S22.
  const double sigma_n = (-eta2 + root) / (2.0 * eta1);
  snap.sigma = sigma_n;
  if (sigma_n < n11 - kClaimTol || sigma_n < n22 - kClaimTol) {
    throw InvariantViolation("metric_2d: sigma fails sigma >= max(S11, S22)");
  }

  // Square-root arguments are nonnegative analytically; clamp roundoff.
  const double r1 = std::sqrt(std::max(sigma_n - n11, 0.0));
  const double r2 = std::sqrt(std::max(sigma_n - n22, 0.0)) *
                    sgn(eps * sigma_n - n12);
  // [1 eps; eps 1] [tau; rho] = [r1; r2], determinant eta1 > 0 here.
  const double tau = (r1 - eps * r2) / eta1;
  const double rho = (r2 - eps * r1) / eta1;

  const double u_sq_n = tau * tau + rho * rho + 2.0 * eps * tau * rho;
  snap.u_norm_sq = u_sq_n;
  const double u_sq_closed = root / eta1;
  if (std::abs(u_sq_n - u_sq_closed) >
      1e-8 * std::max(1.0, std::abs(u_sq_closed))) {
    throw InvariantViolation(
        "metric_2d: ||u||^2 disagrees with sqrt(disc)/eta1");
  }
  if (sigma_n < u_sq_n - kClaimTol) {
    throw InvariantViolation("metric_2d: sigma fails sigma >= ||u||^2");
  }
  if (!(sigma_n > u_sq_n)) {
    // Equality only occurs for parallel inputs; treat as degenerate.
    return fall_back();
  }

  if (snapshot != nullptr) *snapshot = snap;
  const double sigma = sigma_n * scale;
  Vector u = std::sqrt(scale) * (tau * g + rho * d);
  return RankOneMetric(sigma, std::move(u));
}

}  // namespace imro
