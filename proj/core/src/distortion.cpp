#include "rdcalib/distortion.hpp"

#include <sstream>

#include "rdcalib/error.hpp"

namespace rdcalib {

namespace {

constexpr int kNewtonMaxIterations = 50;
constexpr double kNewtonTolerance = 1e-12;
constexpr double kIdentityLimit = 1e-12;

void check_radius(double r, const DistortionModel& model) {
  const auto r_max = max_valid_radius(model);
  if (r_max && !(r < *r_max)) {
    std::ostringstream msg;
    msg << "distorted radius " << r << " >= " << *r_max << " for lambda " << model.lambda;
    throw Error(ErrorCode::RadiusOutOfRange, msg.str());
  }
}

double distort_radius_division(double ru, double lambda) {
  if (std::abs(lambda * ru) < kIdentityLimit) return ru;
  const double disc = 1.0 - 4.0 * lambda * ru * ru;
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "undistorted radius " << ru << " has no distorted preimage for lambda " << lambda;
    throw Error(ErrorCode::NoRealRoot, msg.str());
  }
  // (1 - sqrt(disc)) / (2 lambda ru), rationalized to avoid cancellation.
  return 2.0 * ru / (1.0 + std::sqrt(disc));
}

double distort_radius_polynomial(double ru, double lambda) {
  // Solve r (1 + lambda r^2) = ru.
  double r = ru;
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    const double g = r * (1.0 + lambda * r * r) - ru;
    const double dg = 1.0 + 3.0 * lambda * r * r;
    if (dg <= 0.0) break;
    const double step = g / dg;
    r -= step;
    if (std::abs(step) <= kNewtonTolerance * std::max(1.0, std::abs(r))) {
      if (r >= 0.0 && 1.0 + 3.0 * lambda * r * r > 0.0) return r;
      break;
    }
  }
  std::ostringstream msg;
  msg << "polynomial inversion failed for radius " << ru << ", lambda " << lambda;
  throw Error(ErrorCode::NonConvergence, msg.str());
}

}  // namespace

double DistortionModel::undistortion_factor(double distorted_radius) const {
  const double r2 = distorted_radius * distorted_radius;
  switch (kind) {
    case DistortionKind::Division:
      check_radius(distorted_radius, *this);
      return 1.0 / (1.0 + lambda * r2);
    case DistortionKind::Polynomial:
      return 1.0 + lambda * r2;
  }
  return 1.0;
}

std::optional<double> max_valid_radius(const DistortionModel& model) {
  if (model.kind == DistortionKind::Division && model.lambda < 0.0) {
    return 1.0 / std::sqrt(-model.lambda);
  }
  return std::nullopt;
}

NormalizedPoint undistort_point(const NormalizedPoint& distorted, const DistortionModel& model) {
  if (model.is_identity()) return distorted;
  const double scale = model.undistortion_factor(distorted.radius());
  return {scale * distorted.x, scale * distorted.y};
}

double distort_radius(double undistorted_radius, const DistortionModel& model) {
  if (model.is_identity() || undistorted_radius == 0.0) return undistorted_radius;
  switch (model.kind) {
    case DistortionKind::Division:
      return distort_radius_division(undistorted_radius, model.lambda);
    case DistortionKind::Polynomial:
      return distort_radius_polynomial(undistorted_radius, model.lambda);
  }
  return undistorted_radius;
}

NormalizedPoint distort_point(const NormalizedPoint& undistorted, const DistortionModel& model) {
  if (model.is_identity()) return undistorted;
  const double ru = undistorted.radius();
  if (ru == 0.0) return undistorted;
  const double scale = distort_radius(ru, model) / ru;
  return {scale * undistorted.x, scale * undistorted.y};
}

void CameraIntrinsics::validate() const {
  std::ostringstream msg;
  if (!(f > 0.0)) msg << "focal length must be positive (got " << f << ") ";
  if (!(cx > 0.0 && cx < 1.0)) msg << "cx must lie in (0,1) (got " << cx << ") ";
  if (!(cy > 0.0 && cy < 1.0)) msg << "cy must lie in (0,1) (got " << cy << ") ";
  if (width < 1 || height < 1) msg << "image dimensions must be >= 1 ";
  if (!msg.str().empty()) throw Error(ErrorCode::InvalidArgument, msg.str());
}

// Both axes are scaled by the width-normalized focal length (square pixels).
NormalizedPoint pixel_to_normalized(const PixelPoint& px, const CameraIntrinsics& k) {
  const double fpx = k.focal_pixels();
  return {(px.u - k.cx_pixels()) / fpx, (px.v - k.cy_pixels()) / fpx};
}

PixelPoint normalized_to_pixel(const NormalizedPoint& p, const CameraIntrinsics& k) {
  const double fpx = k.focal_pixels();
  return {p.x * fpx + k.cx_pixels(), p.y * fpx + k.cy_pixels()};
}

}  // namespace rdcalib
