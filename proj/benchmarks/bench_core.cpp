#include <benchmark/benchmark.h>

#include "rdcalib/calibration.hpp"
#include "rdcalib/datagen.hpp"
#include "rdcalib/ransac.hpp"
#include "rdcalib/scene.hpp"
#include "rdcalib/solver9pt.hpp"

namespace {

using namespace rdcalib;

static void BM_Solve9pt(benchmark::State& state) {
  SceneOptions so;
  so.num_points = 9;
  const auto scene = make_scene(so, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(scene.observed, {-1.0, 0.0}));
  }
}
BENCHMARK(BM_Solve9pt);

static void BM_RansacEstimate(benchmark::State& state) {
  SceneOptions so;
  so.num_points = static_cast<int>(state.range(0));
  so.outlier_ratio = 0.3;
  so.noise_sigma = pixel_sigma_to_normalized(0.5, 1242.0);
  const auto scene = make_scene(so, 2);
  RansacConfig cfg;
  cfg.threshold = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(scene.observed, cfg));
  }
}
BENCHMARK(BM_RansacEstimate)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

Image gradient(int w, int h) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>((x + y + 40 * c) & 0xff);
    }
  }
  return img;
}

// Datagen output size.
static void BM_WarpImage(benchmark::State& state) {
  const auto src = gradient(1242, 375);
  const CameraIntrinsics src_k{0.58, 0.5, 0.5, 1242, 375};
  const CameraIntrinsics dst_k{1.0, 0.5, 0.5, 960, 320};
  const auto model = DistortionModel::division(-0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(warp_image(src, src_k, dst_k, model));
  }
}
BENCHMARK(BM_WarpImage)->Unit(benchmark::kMillisecond);

static void BM_UndistortImage(benchmark::State& state) {
  const auto src = gradient(960, 320);
  const CalibrationEstimate est{-0.4, 1.0, 0.5, 0.5, Provenance::Learned};
  const CameraIntrinsics out_k{1.0, 0.5, 0.5, 960, 320};
  for (auto _ : state) {
    benchmark::DoNotOptimize(undistort_image(src, est, out_k));
  }
}
BENCHMARK(BM_UndistortImage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
