#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rdcalib/error.hpp"
#include "rdcalib/ransac.hpp"
#include "rdcalib/scene.hpp"

namespace rdcalib {
namespace {

SceneOptions general(int n, double outliers = 0.0, double noise = 0.0) {
  SceneOptions o;
  o.num_points = n;
  o.outlier_ratio = outliers;
  o.noise_sigma = noise;
  return o;
}

TEST(RequiredIterations, HandValues) {
  EXPECT_EQ(required_iterations(1.0, 0.999, 2000), 1);
  EXPECT_EQ(required_iterations(0.0, 0.999, 2000), 2000);
  // log(0.001) / log(1 - 0.5^9) = 3533.3, clamped.
  EXPECT_EQ(required_iterations(0.5, 0.999, 2000), 2000);
  EXPECT_EQ(required_iterations(0.5, 0.999, 10000), 3534);
  // 0.9^9 = 0.387420489; log(0.001) / log(0.612579511) = 14.1
  EXPECT_EQ(required_iterations(0.9, 0.999, 2000), 15);
}

TEST(DrawSample, DistinctInRangeAndDeterministic) {
  for (std::uint64_t it = 0; it < 500; ++it) {
    const auto s = draw_sample(7, it, 20);
    std::set<std::size_t> uniq(s.begin(), s.end());
    EXPECT_EQ(uniq.size(), 9u);
    for (auto i : s) EXPECT_LT(i, 20u);
    EXPECT_EQ(s, draw_sample(7, it, 20));
  }
  EXPECT_NE(draw_sample(7, 0, 1000), draw_sample(8, 0, 1000));
}

TEST(RansacConfig, Validation) {
  RansacConfig c;
  EXPECT_NO_THROW(c.validate());
  c.threshold = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.confidence = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.lambda_range = {0.0, -1.0};
  EXPECT_THROW(c.validate(), Error);
}

TEST(Estimate, NoiseFreeSceneIsAllInliers) {
  const auto scene = make_scene(general(200), 11);
  const auto r = estimate(scene.observed, {});
  EXPECT_EQ(r.inlier_count, 200);
  EXPECT_LT(std::abs(r.lambda - scene.lambda), 1e-6);
  EXPECT_LT(rotation_error(r.pose.rotation, scene.pose.rotation), 1e-6);
  EXPECT_LT(translation_error(r.pose.translation, scene.pose.translation), 1e-6);
}

TEST(Estimate, OutliersAreRejected) {
  const auto scene = make_scene(general(200, 0.3), 12);
  RansacConfig cfg;
  cfg.seed = 3;
  const auto r = estimate(scene.observed, cfg);
  int true_pos = 0;
  for (std::size_t i = 0; i < r.inlier_mask.size(); ++i) true_pos += r.inlier_mask[i] && scene.is_inlier[i];
  EXPECT_GE(static_cast<double>(true_pos) / r.inlier_count, 0.99);
  EXPECT_LT(std::abs(r.lambda - scene.lambda), 1e-3);
}

TEST(Estimate, TooFewDistinctPoints) {
  const auto scene = make_scene(general(8), 13);
  try {
    estimate(scene.observed, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
  std::vector<Correspondence> dup(20, scene.observed.front());
  try {
    estimate(dup, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
}

TEST(Estimate, PureOutliersFindNoModel) {
  // A lambda range that excludes every plausible root.
  const auto scene = make_scene(general(50), 14);
  RansacConfig cfg;
  cfg.lambda_range = {50.0, 60.0};
  cfg.max_iterations = 50;
  try {
    estimate(scene.observed, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoModelFound);
  }
}

// Properties.

TEST(EstimateProperty, DeterministicPerSeed) {
  const auto scene = make_scene(general(120, 0.2, 1e-4), 15);
  RansacConfig cfg;
  cfg.seed = 99;
  const auto a = estimate(scene.observed, cfg);
  const auto b = estimate(scene.observed, cfg);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.inlier_mask, b.inlier_mask);
  EXPECT_EQ(a.iterations_run, b.iterations_run);
  EXPECT_EQ(a.best_count_history, b.best_count_history);
}

TEST(EstimateProperty, HistoryInliersAndRange) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto scene = make_scene(general(100, 0.3, 2e-4), 100 + seed);
    RansacConfig cfg;
    cfg.seed = seed;
    const auto r = estimate(scene.observed, cfg);
    ASSERT_EQ(static_cast<int>(r.best_count_history.size()), r.iterations_run);
    for (std::size_t i = 1; i < r.best_count_history.size(); ++i) {
      EXPECT_LE(r.best_count_history[i - 1], r.best_count_history[i]);
    }
    EXPECT_TRUE(cfg.lambda_range.contains(r.lambda));
    int count = 0;
    for (std::size_t i = 0; i < scene.observed.size(); ++i) {
      if (!r.inlier_mask[i]) continue;
      ++count;
      EXPECT_LT(sampson_residual(scene.observed[i], r.e, r.lambda), cfg.threshold);
    }
    EXPECT_EQ(count, r.inlier_count);
    EXPECT_GE(r.inlier_count, 9);
  }
}

}  // namespace
}  // namespace rdcalib
