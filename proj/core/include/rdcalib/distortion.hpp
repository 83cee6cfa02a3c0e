#pragma once

#include <cmath>
#include <optional>

namespace rdcalib {

// A point on the normalized image plane (unit focal length, principal point at
// the origin). Used for both distorted and undistorted coordinates.
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;

  double squared_radius() const noexcept { return x * x + y * y; }
  double radius() const noexcept { return std::sqrt(squared_radius()); }
  bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }

  friend bool operator==(const NormalizedPoint&, const NormalizedPoint&) = default;
};

// Continuous pixel coordinates. Pixel (i, j) covers [i, i+1) x [j, j+1), so its
// center sits at (i + 0.5, j + 0.5).
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

enum class DistortionKind { Division, Polynomial };

// One-parameter radial distortion. The model is expressed through its
// undistortion factor f(r), applied to distorted coordinates:
//   Division:   s_u = s_d / (1 + lambda r_d^2)
//   Polynomial: s_u = s_d * (1 + lambda r_d^2)
struct DistortionModel {
  DistortionKind kind = DistortionKind::Division;
  double lambda = 0.0;

  static DistortionModel division(double lambda) { return {DistortionKind::Division, lambda}; }
  static DistortionModel polynomial(double lambda) { return {DistortionKind::Polynomial, lambda}; }
  static DistortionModel identity() { return {}; }

  bool is_identity() const noexcept { return lambda == 0.0; }

  /// Undistortion factor at a distorted radius. Throws RadiusOutOfRange outside
  /// the valid distorted range of a Division model.
  double undistortion_factor(double distorted_radius) const;

  friend bool operator==(const DistortionModel&, const DistortionModel&) = default;
};

/// Largest valid distorted radius, or nullopt when the model is unbounded.
/// Only a Division model with negative lambda is bounded, at 1/sqrt(-lambda).
std::optional<double> max_valid_radius(const DistortionModel& model);

/// Maps a distorted point to its undistorted position.
NormalizedPoint undistort_point(const NormalizedPoint& distorted, const DistortionModel& model);

/// Inverse of undistort_point. Division is solved in closed form; Polynomial by
/// bounded Newton iteration on the radius.
NormalizedPoint distort_point(const NormalizedPoint& undistorted, const DistortionModel& model);

/// Distorted radius for a given undistorted radius (the scalar core of distort_point).
double distort_radius(double undistorted_radius, const DistortionModel& model);

// Intrinsics with a single focal length. f and cx are normalized by image
// width, cy by image height.
struct CameraIntrinsics {
  double f = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 1;
  int height = 1;

  /// Throws InvalidArgument when f <= 0, cx or cy outside (0, 1), or a
  /// dimension is below 1.
  void validate() const;

  double focal_pixels() const noexcept { return f * width; }
  double cx_pixels() const noexcept { return cx * width; }
  double cy_pixels() const noexcept { return cy * height; }
};

NormalizedPoint pixel_to_normalized(const PixelPoint& px, const CameraIntrinsics& k);
PixelPoint normalized_to_pixel(const NormalizedPoint& p, const CameraIntrinsics& k);

}  // namespace rdcalib
