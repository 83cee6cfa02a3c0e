#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rdcalib/twoview.hpp"

namespace rdcalib {

enum class MotionKind { General, Sideways, Forward };

// Synthetic two-view scene with a shared Division model in both views.
struct SceneOptions {
  MotionKind motion = MotionKind::General;
  int num_points = 100;
  double z_min = 2.0;
  double z_max = 10.0;
  // Bound on |x|, |y| of undistorted normalized coordinates in both views.
  double fov = 0.7;
  double lambda = -0.3;
  // Isotropic Gaussian noise on distorted normalized coordinates.
  double noise_sigma = 0.0;
  // Fraction of correspondences whose second point is replaced by a uniform
  // random point.
  double outlier_ratio = 0.0;
  // General motion: rotation angle is drawn uniformly from [-max_rotation, max_rotation].
  double max_rotation = 0.3;
};

struct SyntheticScene {
  RelativePose pose;
  double lambda = 0.0;
  std::vector<Eigen::Vector3d> points;   // camera-1 frame
  std::vector<Correspondence> observed;  // distorted, noisy, with outliers
  std::vector<Correspondence> undistorted;
  std::vector<bool> is_inlier;
};

/// Deterministic in (seed, stream).
SyntheticScene make_scene(const SceneOptions& options, std::uint64_t seed, std::uint64_t stream = 0);

/// Noise sigma on the normalized plane for a pixel-level sigma at a given
/// image width and width-normalized focal length.
inline double pixel_sigma_to_normalized(double sigma_px, double width_px, double f = 1.0) {
  return sigma_px / (f * width_px);
}

}  // namespace rdcalib
