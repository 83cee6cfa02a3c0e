#include "rdcalib/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "rdcalib/error.hpp"
#include "rdcalib/random.hpp"

namespace rdcalib {

void RansacConfig::validate() const {
  std::ostringstream msg;
  if (!(threshold > 0.0)) msg << "threshold must be positive; ";
  if (!(confidence > 0.0 && confidence < 1.0)) msg << "confidence must lie in (0,1); ";
  if (max_iterations < 1) msg << "max_iterations must be >= 1; ";
  if (!(lambda_range.lo <= lambda_range.hi)) msg << "lambda range is inverted; ";
  if (!msg.str().empty()) throw Error(ErrorCode::InvalidArgument, msg.str());
}

std::array<std::size_t, 9> draw_sample(std::uint64_t seed, std::uint64_t iteration, std::size_t n) {
  CounterRng rng(seed, iteration);
  std::array<std::size_t, 9> sample{};
  std::size_t filled = 0;
  while (filled < sample.size()) {
    const std::size_t idx = rng.uniform_index(n);
    if (std::find(sample.begin(), sample.begin() + filled, idx) == sample.begin() + filled) {
      sample[filled++] = idx;
    }
  }
  return sample;
}

int required_iterations(double inlier_ratio, double confidence, int max_iterations) {
  if (inlier_ratio <= 0.0) return max_iterations;
  const double w9 = std::pow(std::min(inlier_ratio, 1.0), 9);
  if (w9 >= 1.0) return 1;
  const double denom = std::log1p(-w9);
  if (denom == 0.0) return max_iterations;
  const double n = std::ceil(std::log1p(-confidence) / denom);
  return n >= max_iterations ? max_iterations : std::max(1, static_cast<int>(n));
}

namespace {

int count_inliers(std::span<const Correspondence> corrs, const SolverCandidate& cand, double threshold) {
  int count = 0;
  for (const auto& c : corrs) {
    if (sampson_residual(c, cand.e, cand.lambda) < threshold) ++count;
  }
  return count;
}

std::size_t count_distinct(std::span<const Correspondence> corrs) {
  std::set<std::array<double, 4>> seen;
  for (const auto& c : corrs) seen.insert({c.p1.x, c.p1.y, c.p2.x, c.p2.y});
  return seen.size();
}

}  // namespace

RansacResult estimate(std::span<const Correspondence> corrs, const RansacConfig& cfg) {
  cfg.validate();
  if (corrs.size() < 9 || count_distinct(corrs) < 9) {
    std::ostringstream msg;
    msg << "need at least 9 distinct correspondences, got " << count_distinct(corrs);
    throw Error(ErrorCode::TooFewPoints, msg.str());
  }

  const std::size_t n = corrs.size();
  std::array<Correspondence, 9> minimal;
  SolverCandidate best;
  int best_count = 0;
  int needed = cfg.max_iterations;

  RansacResult result;
  int it = 0;
  for (; it < needed; ++it) {
    const auto sample = draw_sample(cfg.seed, static_cast<std::uint64_t>(it), n);
    for (std::size_t k = 0; k < sample.size(); ++k) minimal[k] = corrs[sample[k]];

    std::vector<SolverCandidate> candidates;
    try {
      candidates = solve(minimal, cfg.lambda_range);
    } catch (const Error&) {
      result.best_count_history.push_back(best_count);
      continue;
    }
    for (const auto& cand : candidates) {
      const int count = count_inliers(corrs, cand, cfg.threshold);
      if (count > best_count) {
        best_count = count;
        best = cand;
        needed = std::min(needed, required_iterations(static_cast<double>(count) / static_cast<double>(n),
                                                      cfg.confidence, cfg.max_iterations));
      }
    }
    result.best_count_history.push_back(best_count);
  }
  result.iterations_run = it;

  if (best_count < 9) {
    std::ostringstream msg;
    msg << "best hypothesis has " << best_count << " inliers after " << it << " iterations";
    throw Error(ErrorCode::NoModelFound, msg.str());
  }

  result.e = best.e;
  result.lambda = best.lambda;
  result.inlier_count = best_count;
  result.inlier_mask.resize(n);
  std::vector<Correspondence> inliers;
  inliers.reserve(static_cast<std::size_t>(best_count));
  for (std::size_t i = 0; i < n; ++i) {
    result.inlier_mask[i] = sampson_residual(corrs[i], best.e, best.lambda) < cfg.threshold;
    if (result.inlier_mask[i]) inliers.push_back(corrs[i]);
  }

  try {
    const auto poses = decompose(best.e);
    result.pose = select_by_cheirality(poses, inliers, best.lambda);
  } catch (const Error& err) {
    throw Error(ErrorCode::NoModelFound, std::string("pose recovery failed: ") + err.what());
  }
  return result;
}

}  // namespace rdcalib
