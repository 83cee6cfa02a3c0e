#include "rdcalib/degeneracy.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "rdcalib/error.hpp"
#include "rdcalib/random.hpp"
#include "rdcalib/solver9pt.hpp"

namespace rdcalib {

namespace {

constexpr int kMaxAttemptsPerPoint = 10000;

}  // namespace

Correspondence project_forward(const Eigen::Vector3d& point, const DistortionModel& theta1,
                               const DistortionModel& theta2) {
  const double z1 = point.z();
  if (!(z1 > 1.0)) {
    std::ostringstream msg;
    msg << "forward motion needs Z1 > 1, got " << z1;
    throw Error(ErrorCode::InvalidDepthRange, msg.str());
  }
  const NormalizedPoint u1{point.x() / z1, point.y() / z1};
  const double z2 = z1 - 1.0;
  const NormalizedPoint u2{point.x() / z2, point.y() / z2};
  return {distort_point(u1, theta1), distort_point(u2, theta2)};
}

std::pair<ForwardScene, std::vector<Correspondence>> generate_forward_scene(const ForwardSceneOptions& options,
                                                                            const DistortionModel& theta1,
                                                                            const DistortionModel& theta2,
                                                                            std::uint64_t seed) {
  if (!(options.z_min > 1.0) || !(options.z_min <= options.z_max)) {
    std::ostringstream msg;
    msg << "depth range [" << options.z_min << ", " << options.z_max << "] must satisfy 1 < zmin <= zmax";
    throw Error(ErrorCode::InvalidDepthRange, msg.str());
  }
  if (options.num_points < 1) throw Error(ErrorCode::InvalidArgument, "forward scene needs at least one point");

  CounterRng rng(seed, 0);
  ForwardScene scene;
  scene.theta1 = theta1;
  scene.theta2 = theta2;
  std::vector<Correspondence> corrs;
  for (int i = 0; i < options.num_points; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxAttemptsPerPoint) {
        throw Error(ErrorCode::InvalidArgument, "could not place forward-scene points inside the field of view");
      }
      const double z1 = rng.uniform(options.z_min, options.z_max);
      const NormalizedPoint u1{rng.uniform(-options.fov_limit, options.fov_limit),
                               rng.uniform(-options.fov_limit, options.fov_limit)};
      const double scale = z1 / (z1 - 1.0);
      if (std::abs(scale * u1.x) > options.fov_limit || std::abs(scale * u1.y) > options.fov_limit) continue;
      const Eigen::Vector3d point(u1.x * z1, u1.y * z1, z1);
      try {
        corrs.push_back(project_forward(point, theta1, theta2));
      } catch (const Error&) {
        continue;
      }
      scene.points.push_back(point);
      break;
    }
  }
  return {std::move(scene), std::move(corrs)};
}

double alpha(const NormalizedPoint& sd1, const NormalizedPoint& sd2, const DistortionModel& theta1,
             const DistortionModel& theta2, const DistortionModel& theta1_fake, const DistortionModel& theta2_fake) {
  const double r1 = sd1.radius();
  const double r2 = sd2.radius();
  return theta2_fake.undistortion_factor(r2) * theta1.undistortion_factor(r1) /
         (theta1_fake.undistortion_factor(r1) * theta2.undistortion_factor(r2));
}

double fake_depth(double z1, double alpha) {
  const double denom = (alpha - 1.0) * z1 + 1.0;
  if (denom == 0.0 || !std::isfinite(denom)) {
    std::ostringstream msg;
    msg << "(alpha - 1) Z1 + 1 vanishes for Z1 = " << z1 << ", alpha = " << alpha;
    throw Error(ErrorCode::SingularDenominator, msg.str());
  }
  return alpha * z1 / denom;
}

FakeSolution make_fake_solution(const ForwardScene& scene, std::span<const Correspondence> corrs,
                                const DistortionModel& theta1_fake, const DistortionModel& theta2_fake) {
  if (corrs.size() != scene.points.size()) {
    throw Error(ErrorCode::InvalidArgument, "scene points and correspondences differ in count");
  }
  FakeSolution fake{theta1_fake, theta2_fake, {}, {}};
  fake.depths_fake.reserve(corrs.size());
  fake.cheirality_violation.reserve(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const double a = alpha(corrs[i].p1, corrs[i].p2, scene.theta1, scene.theta2, theta1_fake, theta2_fake);
    const double z = fake_depth(scene.points[i].z(), a);
    fake.depths_fake.push_back(z);
    fake.cheirality_violation.push_back(!(z > 0.0) || !(z - scene.translation_z > 0.0));
  }
  return fake;
}

double verify_ambiguity(const ForwardScene& scene, std::span<const Correspondence> corrs, const FakeSolution& fake) {
  if (corrs.size() != fake.depths_fake.size()) {
    throw Error(ErrorCode::InvalidArgument, "fake solution does not match the correspondences");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const auto& sd1 = corrs[i].p1;
    const auto& sd2 = corrs[i].p2;
    const double z = fake.depths_fake[i];
    const double f1 = fake.theta1_fake.undistortion_factor(sd1.radius());
    const double f2 = fake.theta2_fake.undistortion_factor(sd2.radius());
    const double ratio = z / (z - scene.translation_z);
    const double dx = f2 * sd2.x - ratio * f1 * sd1.x;
    const double dy = f2 * sd2.y - ratio * f1 * sd1.y;
    worst = std::max(worst, std::hypot(dx, dy));
  }
  return worst;
}

std::vector<int> histogram(std::span<const double> values, double lo, double hi, int bins) {
  if (bins < 1 || !(lo < hi)) throw Error(ErrorCode::InvalidArgument, "histogram needs bins >= 1 and lo < hi");
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto idx = static_cast<int>(std::floor((v - lo) / width));
    idx = std::min(idx, bins - 1);
    ++counts[static_cast<std::size_t>(idx)];
  }
  return counts;
}

SpreadSummary lambda_spread_experiment(const SpreadOptions& options) {
  if (options.num_trials < 0) throw Error(ErrorCode::InvalidArgument, "negative trial count");
  SpreadSummary summary;
  summary.hist_lo = options.lambda_range.lo;
  summary.hist_hi = options.lambda_range.hi;

  for (int trial = 0; trial < options.num_trials; ++trial) {
    SceneOptions scene_opts = options.scene;
    scene_opts.num_points = options.mode == SpreadMode::PerMinimalSample ? 9 : options.points_per_trial;
    try {
      const auto scene = make_scene(scene_opts, options.seed, static_cast<std::uint64_t>(trial));
      if (options.mode == SpreadMode::PerMinimalSample) {
        const auto cands = solve(scene.observed, options.lambda_range);
        summary.estimates.push_back(cands.front().lambda);
      } else {
        RansacConfig cfg = options.ransac;
        cfg.lambda_range = options.lambda_range;
        cfg.seed = splitmix64(options.seed ^ static_cast<std::uint64_t>(trial));
        summary.estimates.push_back(estimate(scene.observed, cfg).lambda);
      }
    } catch (const Error&) {
      ++summary.failed_trials;
    }
  }

  if (!summary.estimates.empty()) {
    const double n = static_cast<double>(summary.estimates.size());
    summary.mean = std::accumulate(summary.estimates.begin(), summary.estimates.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : summary.estimates) ss += (v - summary.mean) * (v - summary.mean);
    summary.stddev = std::sqrt(ss / n);
  }
  if (summary.hist_lo < summary.hist_hi) {
    summary.histogram = histogram(summary.estimates, summary.hist_lo, summary.hist_hi, options.histogram_bins);
  }
  return summary;
}

}  // namespace rdcalib
