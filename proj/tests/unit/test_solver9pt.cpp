#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rdcalib/degeneracy.hpp"
#include "rdcalib/error.hpp"
#include "rdcalib/solver9pt.hpp"

namespace rdcalib {
namespace {

using testing::hand_scene;
using testing::random_rotation;

std::vector<Correspondence> first9(const std::vector<Correspondence>& c) { return {c.begin(), c.begin() + 9}; }

const SolverCandidate* closest(const std::vector<SolverCandidate>& cands, double lambda) {
  const SolverCandidate* best = nullptr;
  for (const auto& c : cands) {
    if (!best || std::abs(c.lambda - lambda) < std::abs(best->lambda - lambda)) best = &c;
  }
  return best;
}

double pose_rotation_error(const SolverCandidate& cand, const std::vector<Correspondence>& corrs,
                           const Eigen::Matrix3d& r_gt) {
  const auto poses = decompose(cand.e);
  return rotation_error(select_by_cheirality(poses, corrs, cand.lambda).rotation, r_gt);
}

TEST(BuildQep, ExpansionMatchesDirectResidual) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Correspondence> corrs;
    for (int i = 0; i < 9; ++i) corrs.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
    Eigen::Matrix3d e;
    for (int i = 0; i < 9; ++i) e(i / 3, i % 3) = u(rng);
    const double lambda = u(rng);
    const auto pencil = build_qep(corrs);
    const Eigen::Matrix<double, 9, 1> rows = pencil.evaluate(lambda) * flatten(e);
    for (int i = 0; i < 9; ++i) {
      EXPECT_NEAR(rows(i), algebraic_residual(corrs[i], {e}, lambda), 1e-12);
    }
  }
}

TEST(BuildQep, ZeroLambdaIsClassicalSystem) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Correspondence> corrs;
  for (int i = 0; i < 9; ++i) corrs.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
  const auto pencil = build_qep(corrs);
  for (int i = 0; i < 9; ++i) {
    const auto& c = corrs[i];
    Eigen::Matrix<double, 1, 9> classical;
    classical << c.p1.x * c.p2.x, c.p1.x * c.p2.y, c.p1.x, c.p1.y * c.p2.x, c.p1.y * c.p2.y, c.p1.y, c.p2.x,
        c.p2.y, 1.0;
    EXPECT_LT((pencil.a.row(i) - classical).norm(), 1e-15);
  }
}

TEST(BuildQep, PrincipalPointRowsHaveNoLambdaTerms) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Correspondence> corrs{{{0.0, 0.0}, {0.0, 0.0}}};
  for (int i = 1; i < 9; ++i) corrs.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}});
  const auto pencil = build_qep(corrs);
  EXPECT_EQ(pencil.b.row(0).norm(), 0.0);
  EXPECT_EQ(pencil.c.row(0).norm(), 0.0);
}

TEST(BuildQep, DuplicatesAndWrongCount) {
  std::vector<Correspondence> corrs(9, Correspondence{{0.1, 0.2}, {0.3, 0.4}});
  try {
    build_qep(corrs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicatePoints);
  }
  corrs.pop_back();
  EXPECT_THROW(build_qep(corrs), Error);
}

TEST(Solve, SidewaysSceneRecoversLambdaAndRotation) {
  const Eigen::Matrix3d r = Eigen::AngleAxisd(0.05, Eigen::Vector3d(0.2, 1.0, 0.1).normalized()).toRotationMatrix();
  const auto scene = hand_scene(r, Eigen::Vector3d::UnitX(), -0.3, 9, 21);
  const auto cands = solve(scene.distorted, {-1.0, 0.0});
  const auto* best = closest(cands, -0.3);
  ASSERT_NE(best, nullptr);
  EXPECT_LT(std::abs(best->lambda + 0.3), 1e-6);
  EXPECT_LT(pose_rotation_error(*best, scene.distorted, r), 1e-6);
  EXPECT_EQ(&cands.front(), best);
}

TEST(Solve, PinholeSceneRecoversZeroLambda) {
  std::mt19937_64 rng(22);
  const Eigen::Matrix3d r = random_rotation(rng, 0.3);
  const auto scene = hand_scene(r, Eigen::Vector3d(0.7, 0.3, 0.2), 0.0, 9, 23);
  const auto cands = solve(scene.distorted, {-1.0, 0.0});
  const auto* best = closest(cands, 0.0);
  ASSERT_NE(best, nullptr);
  EXPECT_LT(std::abs(best->lambda), 1e-6);
}

TEST(Solve, ForwardMotionYieldsSpreadOfExactCandidates) {
  // Over a wide lambda range, a pure-forward sample admits several exact
  // solutions far apart in lambda.
  ForwardSceneOptions opts;
  opts.num_points = 9;
  const auto [scene, corrs] =
      generate_forward_scene(opts, DistortionModel::division(-0.5), DistortionModel::division(-0.5), 31);
  const auto cands = solve(corrs, {-1e3, 1e3});
  std::vector<double> exact;
  for (const auto& c : cands) {
    if (c.residual < 1e-8) exact.push_back(c.lambda);
  }
  ASSERT_GE(exact.size(), 2u);
  const auto [lo, hi] = std::minmax_element(exact.begin(), exact.end());
  EXPECT_GT(*hi - *lo, 0.2);
}

TEST(Solve, RangeFilterAndNoCandidate) {
  const auto scene = hand_scene(Eigen::Matrix3d::Identity(), Eigen::Vector3d::UnitX(), -0.3, 9, 41);
  for (const auto& c : solve(scene.distorted, {-0.5, -0.1})) EXPECT_TRUE((LambdaRange{-0.5, -0.1}.contains(c.lambda)));
  try {
    solve(scene.distorted, {5.0, 6.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCandidate);
  }
}

TEST(Solve, CandidatesSortedByResidual) {
  std::mt19937_64 rng(50);
  const auto scene = hand_scene(random_rotation(rng, 0.3), Eigen::Vector3d(0.2, 1.0, 0.3), -0.6, 9, 51);
  const auto cands = solve(scene.distorted, {-100.0, 100.0});
  for (std::size_t i = 1; i < cands.size(); ++i) EXPECT_LE(cands[i - 1].residual, cands[i].residual);
}

// Properties.

TEST(SolveProperty, LowResidualCandidatesAreGroundTruth) {
  // Extra real roots of the pencil do exist, but none of them passes as an
  // exact essential solution.
  std::mt19937_64 rng(60);
  std::uniform_real_distribution<double> lam(-0.9, -0.1);
  std::normal_distribution<double> n(0.0, 1.0);
  int with_extra_roots = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const double lambda = lam(rng);
    const Eigen::Matrix3d r = random_rotation(rng, 0.3);
    const Eigen::Vector3d t(n(rng), n(rng), n(rng));
    const auto scene = hand_scene(r, t.normalized(), lambda, 9, 1000 + trial);
    const auto cands = solve(scene.distorted, {-1.0, 0.0});
    ASSERT_FALSE(cands.empty());
    EXPECT_LT(cands.front().residual, 1e-6);
    EXPECT_LT(std::abs(cands.front().lambda - lambda), 1e-4);
    for (const auto& c : cands) {
      if (c.residual < 1e-6) EXPECT_LT(std::abs(c.lambda - lambda), 1e-4);
    }
    if (cands.size() > 1) ++with_extra_roots;
  }
  RecordProperty("trials_with_extra_roots", with_extra_roots);
}

TEST(SolveProperty, CoordinateScalingRescalesLambda) {
  // x -> s x maps the lifted vector to diag(s, s, 1) lift when lambda -> lambda / s^2.
  std::mt19937_64 rng(70);
  std::uniform_real_distribution<double> us(0.5, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto scene = hand_scene(random_rotation(rng, 0.3), Eigen::Vector3d(1.0, 0.3, 0.2), -0.4, 9, 2000 + trial);
    const double s = us(rng);
    std::vector<Correspondence> scaled;
    for (const auto& c : scene.distorted) scaled.push_back({{s * c.p1.x, s * c.p1.y}, {s * c.p2.x, s * c.p2.y}});
    const auto base = solve(scene.distorted, {-1.0, 0.0});
    const auto moved = solve(scaled, {-1.0 / (s * s), 0.0});
    const auto* c = closest(moved, base.front().lambda / (s * s));
    ASSERT_NE(c, nullptr);
    EXPECT_NEAR(c->lambda * s * s, base.front().lambda, 1e-7);
  }
}

TEST(SolveProperty, CompletenessOnRandomGeneralScenes) {
  std::mt19937_64 rng(80);
  std::uniform_real_distribution<double> lam(-0.9, -0.1);
  std::normal_distribution<double> n(0.0, 1.0);
  int found = 0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    const double lambda = lam(rng);
    const Eigen::Vector3d t(n(rng), n(rng), n(rng));
    const auto scene = hand_scene(random_rotation(rng, 0.5), t.normalized(), lambda, 9, 3000 + trial);
    try {
      const auto cands = solve(scene.distorted, {-1.0, 0.0});
      const auto* c = closest(cands, lambda);
      if (c && std::abs(c->lambda - lambda) < 1e-4) ++found;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(found, static_cast<int>(0.95 * trials));
}

}  // namespace
}  // namespace rdcalib
