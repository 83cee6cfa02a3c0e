#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rdcalib/distortion.hpp"
#include "rdcalib/ransac.hpp"
#include "rdcalib/scene.hpp"
#include "rdcalib/twoview.hpp"

namespace rdcalib {

// Pure forward motion with t_z = 1: a point at depth Z1 in view 1 sits at
// Z1 - 1 in view 2, and s_u2 = Z1 / (Z1 - 1) * s_u1. Each view may carry its
// own distortion.
struct ForwardScene {
  std::vector<Eigen::Vector3d> points;  // camera-1 frame
  double translation_z = 1.0;
  DistortionModel theta1;
  DistortionModel theta2;
};

struct ForwardSceneOptions {
  int num_points = 50;
  double z_min = 1.5;
  double z_max = 30.0;
  // Bound on |x|, |y| of undistorted normalized coordinates in both views.
  double fov_limit = 0.8;
};

struct FakeSolution {
  DistortionModel theta1_fake;
  DistortionModel theta2_fake;
  std::vector<double> depths_fake;
  // Per point: the fake depth places the point behind either camera
  // (Z1' <= 0 or Z1' - 1 <= 0). Recorded, never rejected.
  std::vector<bool> cheirality_violation;
};

/// Distorted correspondence of a camera-1 point under forward motion.
/// Throws InvalidDepthRange when Z1 <= 1.
Correspondence project_forward(const Eigen::Vector3d& point, const DistortionModel& theta1,
                               const DistortionModel& theta2);

/// Random forward scene and its distorted correspondences. Throws
/// InvalidDepthRange unless z_min > 1 and z_min <= z_max.
std::pair<ForwardScene, std::vector<Correspondence>> generate_forward_scene(const ForwardSceneOptions& options,
                                                                            const DistortionModel& theta1,
                                                                            const DistortionModel& theta2,
                                                                            std::uint64_t seed);

/// Depth-compensation factor
///   f(sd2; theta2') f(sd1; theta1) / (f(sd1; theta1') f(sd2; theta2)).
double alpha(const NormalizedPoint& sd1, const NormalizedPoint& sd2, const DistortionModel& theta1,
             const DistortionModel& theta2, const DistortionModel& theta1_fake, const DistortionModel& theta2_fake);

/// alpha Z1 / ((alpha - 1) Z1 + 1). Throws SingularDenominator.
double fake_depth(double z1, double alpha);

/// Fake depths for every correspondence of a scene under the given fake
/// distortion pair.
FakeSolution make_fake_solution(const ForwardScene& scene, std::span<const Correspondence> corrs,
                                const DistortionModel& theta1_fake, const DistortionModel& theta2_fake);

/// Max over points of |f(sd2; theta2') sd2 - Z1'/(Z1' - 1) f(sd1; theta1') sd1|
/// (Euclidean norm on the normalized plane).
double verify_ambiguity(const ForwardScene& scene, std::span<const Correspondence> corrs, const FakeSolution& fake);

enum class SpreadMode { PerMinimalSample, PerRansac };

struct SpreadOptions {
  SpreadMode mode = SpreadMode::PerMinimalSample;
  int num_trials = 500;
  std::uint64_t seed = 0;
  SceneOptions scene;  // motion, noise and lambda of the correspondence source
  int points_per_trial = 200;  // scene size in PerRansac mode
  LambdaRange lambda_range{-1.0, 0.0};
  RansacConfig ransac;  // PerRansac mode; seed is overridden per trial
  int histogram_bins = 50;
};

struct SpreadSummary {
  std::vector<double> estimates;
  int failed_trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double hist_lo = -1.0;
  double hist_hi = 0.0;
  std::vector<int> histogram;
};

/// Per-trial lambda estimates from either the best in-range candidate of a
/// random minimal sample or a full RANSAC run. Trials are seeded
/// independently; failures are counted, not fatal.
SpreadSummary lambda_spread_experiment(const SpreadOptions& options);

/// Histogram over [lo, hi] with uniform bins; values outside are dropped.
std::vector<int> histogram(std::span<const double> values, double lo, double hi, int bins);

}  // namespace rdcalib
