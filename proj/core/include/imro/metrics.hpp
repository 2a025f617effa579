#pragma once

#include <Eigen/Core>

#include "imro/linops.hpp"
#include "imro/prox.hpp"
#include "imro/types.hpp"

namespace imro {

// Scalars behind one IMRO-2D metric construction, kept for diagnostics and
// the validity checks. S is the 2x2 Gram matrix of the images of the
// normalized gradient and direction, eps their inner product, and the etas
// the coefficients of the quadratic sigma solves. Entries are reported in the
// normalized scale used internally (S divided by max(S11, S22)).
struct CurvatureSnapshot2D {
  Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
  double eps = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double discriminant = 0.0;
  double sigma = 0.0;        // root taken, in normalized scale
  double u_norm_sq = 0.0;    // ||u||^2 in normalized scale
  double scale = 1.0;        // normalization factor (unnormalized S / scale)
  bool degenerate = false;   // parallel-direction fallback taken
};

// IMRO-1D: sigma = norm_a^2 and u chosen so the quadratic model matches f on
// the line through v and upper-bounds it everywhere (H v = A^t A v and
// H >= A^t A provided norm_a >= ||A||). v is normalized internally. Costs
// exactly one apply plus one adjoint.
//
// When v is numerically a dominant singular vector the rank-one part
// degenerates and u = 0 is returned. v = 0 is an error.
RankOneMetric metric_1d(const LinearOperator& A, double norm_a,
                        const Vector& v);

// IMRO-2D: sigma and u = tau*grad + rho*dir chosen so the model agrees with
// f on span{grad, dir}. Costs two applies and no adjoints; pass image_grad
// and/or image_dir (images of the *unnormalized* inputs) to skip applies the
// caller has already paid for.
//
// grad parallel to dir makes the construction singular; in that case the
// metric falls back to the 1D construction along grad with sigma bumped by a
// small multiple of itself, which needs norm_a. The validity relations
// (real discriminant, sigma >= max(S11, S22), sigma >= ||u||^2 with
// ||u||^2 = sqrt(eta2^2 - 4 eta1 eta3)/eta1) are checked on every call and
// violations beyond roundoff throw InvariantViolation.
RankOneMetric metric_2d(const LinearOperator& A, double norm_a,
                        const Vector& grad, const Vector& dir,
                        const Vector* image_grad = nullptr,
                        const Vector* image_dir = nullptr,
                        CurvatureSnapshot2D* snapshot = nullptr);

}  // namespace imro
