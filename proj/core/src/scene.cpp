#include "rdcalib/scene.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "rdcalib/error.hpp"
#include "rdcalib/random.hpp"

namespace rdcalib {

namespace {

constexpr int kMaxAttemptsPerPoint = 10000;
constexpr double kMinDepth2 = 0.5;

RelativePose draw_pose(const SceneOptions& options, CounterRng& rng) {
  RelativePose pose;
  switch (options.motion) {
    case MotionKind::Forward:
      pose.rotation.setIdentity();
      pose.translation = Eigen::Vector3d::UnitZ();
      break;
    case MotionKind::Sideways:
      pose.rotation.setIdentity();
      pose.translation = Eigen::Vector3d::UnitX();
      break;
    case MotionKind::General: {
      Eigen::Vector3d axis(rng.normal(), rng.normal(), rng.normal());
      axis.normalize();
      const double angle = rng.uniform(-options.max_rotation, options.max_rotation);
      pose.rotation = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
      Eigen::Vector3d t(rng.normal(), rng.normal(), rng.normal());
      pose.translation = t.normalized();
      break;
    }
  }
  return pose;
}

}  // namespace

SyntheticScene make_scene(const SceneOptions& options, std::uint64_t seed, std::uint64_t stream) {
  if (options.num_points < 0 || !(options.z_min > 0.0) || !(options.z_min <= options.z_max)) {
    throw Error(ErrorCode::InvalidArgument, "invalid scene options");
  }
  CounterRng rng(seed, stream);
  const auto model = DistortionModel::division(options.lambda);

  SyntheticScene scene;
  scene.lambda = options.lambda;
  scene.pose = draw_pose(options, rng);

  for (int i = 0; i < options.num_points; ++i) {
    int attempts = 0;
    for (;; ++attempts) {
      if (attempts >= kMaxAttemptsPerPoint) {
        throw Error(ErrorCode::InvalidArgument, "could not place scene points inside both views");
      }
      const NormalizedPoint u1{rng.uniform(-options.fov, options.fov), rng.uniform(-options.fov, options.fov)};
      const double z1 = rng.uniform(options.z_min, options.z_max);
      const Eigen::Vector3d x1(u1.x * z1, u1.y * z1, z1);
      const Eigen::Vector3d x2 = scene.pose.rotation.transpose() * (x1 - scene.pose.translation);
      if (x2.z() < kMinDepth2) continue;
      const NormalizedPoint u2{x2.x() / x2.z(), x2.y() / x2.z()};
      if (std::abs(u2.x) > options.fov || std::abs(u2.y) > options.fov) continue;

      Correspondence clean{distort_point(u1, model), distort_point(u2, model)};
      scene.points.push_back(x1);
      scene.undistorted.push_back({u1, u2});
      Correspondence obs = clean;
      if (options.noise_sigma > 0.0) {
        obs.p1.x += options.noise_sigma * rng.normal();
        obs.p1.y += options.noise_sigma * rng.normal();
        obs.p2.x += options.noise_sigma * rng.normal();
        obs.p2.y += options.noise_sigma * rng.normal();
      }
      scene.observed.push_back(obs);
      scene.is_inlier.push_back(true);
      break;
    }
  }

  // Outliers replace the second observation by a random point in the
  // distorted image of the field of view.
  const auto n = static_cast<std::size_t>(options.num_points);
  const auto num_outliers = static_cast<std::size_t>(std::llround(options.outlier_ratio * static_cast<double>(n)));
  const double extent = distort_radius(options.fov, model) ;
  for (std::size_t k = 0; k < num_outliers && k < n; ++k) {
    // Spread outliers over the index range deterministically.
    const std::size_t idx = (k * n) / num_outliers;
    scene.observed[idx].p2 = {rng.uniform(-extent, extent), rng.uniform(-extent, extent)};
    scene.is_inlier[idx] = false;
  }
  return scene;
}

}  // namespace rdcalib
