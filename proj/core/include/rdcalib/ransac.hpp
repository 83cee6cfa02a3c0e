#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rdcalib/solver9pt.hpp"
#include "rdcalib/twoview.hpp"

namespace rdcalib {

struct RansacConfig {
  double threshold = 2e-4;  // Sampson residual, normalized-plane units
  double confidence = 0.999;
  int max_iterations = 2000;
  LambdaRange lambda_range{-1.0, 0.0};
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on a non-positive threshold, confidence outside
  /// (0, 1), non-positive iteration budget or an inverted lambda range.
  void validate() const;
};

struct RansacResult {
  EssentialMatrix e;
  double lambda = 0.0;
  RelativePose pose;
  std::vector<bool> inlier_mask;
  int inlier_count = 0;
  int iterations_run = 0;
  // Best inlier count after each iteration; non-decreasing.
  std::vector<int> best_count_history;
};

/// Nine-point sample drawn for a given iteration. Depends only on
/// (seed, iteration, n), so iterations may be evaluated in any order.
std::array<std::size_t, 9> draw_sample(std::uint64_t seed, std::uint64_t iteration, std::size_t n);

/// Adaptive iteration bound log(1 - confidence) / log(1 - w^9), clamped to
/// max_iterations.
int required_iterations(double inlier_ratio, double confidence, int max_iterations);

/// Robust (E, lambda, pose) estimate from at least nine correspondences.
/// Throws TooFewPoints or NoModelFound.
RansacResult estimate(std::span<const Correspondence> corrs, const RansacConfig& cfg);

}  // namespace rdcalib
