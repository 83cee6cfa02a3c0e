#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <gtest/gtest.h>

#include "rdcalib/datagen.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image smooth_image(int w, int h, int seed = 0) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = static_cast<std::uint8_t>((x * 255) / std::max(1, w - 1));
      img.at(x, y, 1) = static_cast<std::uint8_t>((y * 255) / std::max(1, h - 1));
      img.at(x, y, 2) = static_cast<std::uint8_t>(128 + 100 * std::sin(0.05 * (x + y) + seed));
    }
  }
  return img;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("rdcalib_datagen_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_ / "in");
  }
  void TearDown() override { fs::remove_all(root_); }
  fs::path root_;
};

TEST(SampleParams, PointIntervals) {
  ParamRanges r;
  r.cx = {0.5, 0.5};
  r.cy = {0.4, 0.4};
  r.f = {1.2, 1.2};
  r.lambda = {-0.3, -0.3};
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto p = sample_params(r, 9, i);
    EXPECT_EQ(p.cx, 0.5);
    EXPECT_EQ(p.cy, 0.4);
    EXPECT_EQ(p.f, 1.2);
    EXPECT_EQ(p.lambda, -0.3);
  }
}

TEST(SampleParams, RangeValidation) {
  ParamRanges r;
  EXPECT_NO_THROW(r.validate());
  r.f = {2.0, 1.0};
  EXPECT_THROW(r.validate(), Error);
  r = {};
  r.per_image_count = -1;
  EXPECT_THROW(r.validate(), Error);
}

TEST(SampleParamsProperty, ContainmentCoverageAndDeterminism) {
  const ParamRanges r;
  double lo[4] = {1e9, 1e9, 1e9, 1e9};
  double hi[4] = {-1e9, -1e9, -1e9, -1e9};
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto p = sample_params(r, 1, i);
    ASSERT_TRUE(r.cx.contains(p.cx));
    ASSERT_TRUE(r.cy.contains(p.cy));
    ASSERT_TRUE(r.f.contains(p.f));
    ASSERT_TRUE(r.lambda.contains(p.lambda));
    const double v[4] = {p.cx, p.cy, p.f, p.lambda};
    for (int k = 0; k < 4; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
    const auto q = sample_params(r, 1, i);
    ASSERT_EQ(p.lambda, q.lambda);
    ASSERT_EQ(p.f, q.f);
  }
  const Interval iv[4] = {r.cx, r.cy, r.f, r.lambda};
  for (int k = 0; k < 4; ++k) {
    EXPECT_LT(lo[k] - iv[k].lo, 0.01 * iv[k].width());
    EXPECT_LT(iv[k].hi - hi[k], 0.01 * iv[k].width());
  }
}

TEST(WarpImage, IdentityReproducesInput) {
  const auto src = smooth_image(64, 48);
  const CameraIntrinsics k{0.8, 0.5, 0.5, 64, 48};
  const auto out = warp_image(src, k, k, DistortionModel::identity());
  ASSERT_EQ(out.pixels.size(), src.pixels.size());
  for (std::size_t i = 0; i < out.pixels.size(); ++i) EXPECT_LE(std::abs(out.pixels[i] - src.pixels[i]), 1);
}

TEST(WarpImage, BarrelDistortionBendsStraightLines) {
  // A bright horizontal line away from the center row; after barrel
  // distortion its middle must leave the chord through its ends.
  const int w = 200;
  const int h = 120;
  Image src(w, h, 1);
  for (int x = 0; x < w; ++x) {
    for (int y = 18; y < 22; ++y) src.at(x, y) = 255;
  }
  const CameraIntrinsics k{0.5, 0.5, 0.5, w, h};
  const auto out = warp_image(src, k, k, DistortionModel::division(-0.5));
  auto centroid = [&](int x) {
    double s = 0.0;
    double m = 0.0;
    for (int y = 0; y < h / 2; ++y) {
      s += out.at(x, y) * (y + 0.5);
      m += out.at(x, y);
    }
    return m > 0 ? s / m : -1.0;
  };
  const int xl = 40;
  const int xr = w - 1 - xl;
  const double yl = centroid(xl);
  const double yr = centroid(xr);
  const double ym = centroid(w / 2);
  ASSERT_GT(yl, 0.0);
  ASSERT_GT(ym, 0.0);
  EXPECT_GT(std::abs(ym - 0.5 * (yl + yr)), 0.5);
}

TEST(WarpImage, EmptyOverlap) {
  const auto src = smooth_image(16, 16);
  const CameraIntrinsics k{1.0, 0.5, 0.5, 16, 16};
  const CameraIntrinsics far{1.0, 50.0, 0.5, 16, 16};
  try {
    warp_image(src, far, k, DistortionModel::identity());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyOverlap);
  }
}

TEST(Manifest, JsonRoundTrip) {
  LabeledImage a;
  a.image = "x_00.png";
  a.source = "x.png";
  a.lambda = -0.123456789012345;
  a.f = 1.1;
  a.cx = 0.47;
  a.cy = 0.52;
  a.width = 960;
  a.height = 320;
  a.source_f = 0.58;
  const auto back = manifest_from_json(manifest_to_json({a}));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].image, a.image);
  EXPECT_EQ(back[0].lambda, a.lambda);
  EXPECT_EQ(back[0].source_f, a.source_f);
  EXPECT_EQ(back[0].height, 320);
  EXPECT_THROW(manifest_from_json("{not json"), Error);
}

using GenerateDataset = TempDir;

DatagenOptions small_options() {
  DatagenOptions o;
  o.seed = 42;
  o.out_width = 96;
  o.out_height = 32;
  return o;
}

void write_inputs(const fs::path& dir) {
  write_png(dir / "a.png", smooth_image(120, 40, 0));
  write_png(dir / "b.png", smooth_image(120, 40, 1));
  write_png(dir / "c.png", smooth_image(120, 40, 2));
}

TEST_F(GenerateDataset, ThirtyRecordsInRange) {
  write_inputs(root_ / "in");
  const auto opts = small_options();
  const auto m = generate_dataset(root_ / "in", root_ / "out", opts);
  ASSERT_EQ(m.records.size(), 30u);
  EXPECT_TRUE(m.errors.empty());
  const auto listed = manifest_from_json(slurp(root_ / "out" / "manifest.json"));
  ASSERT_EQ(listed.size(), 30u);
  EXPECT_EQ(listed.front().image, "a_00.png");
  EXPECT_EQ(listed.back().image, "c_09.png");
  for (const auto& r : listed) {
    EXPECT_TRUE(fs::exists(root_ / "out" / r.image));
    EXPECT_TRUE(opts.ranges.lambda.contains(r.lambda));
    EXPECT_TRUE(opts.ranges.f.contains(r.f));
    EXPECT_TRUE(opts.ranges.cx.contains(r.cx));
    EXPECT_TRUE(opts.ranges.cy.contains(r.cy));
    EXPECT_EQ(r.width, 96);
  }
}

TEST_F(GenerateDataset, ZeroCountWritesEmptyManifest) {
  write_inputs(root_ / "in");
  auto opts = small_options();
  opts.ranges.per_image_count = 0;
  const auto m = generate_dataset(root_ / "in", root_ / "out", opts);
  EXPECT_TRUE(m.records.empty());
  EXPECT_TRUE(manifest_from_json(slurp(root_ / "out" / "manifest.json")).empty());
}

TEST_F(GenerateDataset, RerunIsByteIdenticalAndSkipsExisting) {
  write_inputs(root_ / "in");
  const auto opts = small_options();
  generate_dataset(root_ / "in", root_ / "out1", opts);
  generate_dataset(root_ / "in", root_ / "out2", opts);
  for (const auto& entry : fs::directory_iterator(root_ / "out1")) {
    EXPECT_EQ(slurp(entry.path()), slurp(root_ / "out2" / entry.path().filename())) << entry.path();
  }
  const auto before = slurp(root_ / "out1" / "manifest.json");
  const auto again = generate_dataset(root_ / "in", root_ / "out1", opts);
  EXPECT_EQ(again.skipped_existing, 30);
  EXPECT_EQ(slurp(root_ / "out1" / "manifest.json"), before);
}

TEST_F(GenerateDataset, StoredImagesMatchTheirLabels) {
  write_inputs(root_ / "in");
  generate_dataset(root_ / "in", root_ / "out", small_options());
  for (const auto& r : manifest_from_json(slurp(root_ / "out" / "manifest.json"))) {
    const auto src = read_png(root_ / "in" / r.source);
    const auto expect = warp_image(src, record_source_intrinsics(r, src.width, src.height), record_intrinsics(r),
                                   DistortionModel::division(r.lambda));
    EXPECT_EQ(read_png(root_ / "out" / r.image), expect) << r.image;
  }
}

TEST_F(GenerateDataset, UnreadableSourceIsLoggedAndSkipped) {
  write_png(root_ / "in" / "a.png", smooth_image(120, 40));
  std::ofstream(root_ / "in" / "broken.png") << "not a png";
  const auto m = generate_dataset(root_ / "in", root_ / "out", small_options());
  EXPECT_EQ(m.records.size(), 10u);
  ASSERT_EQ(m.errors.size(), 1u);
  EXPECT_NE(slurp(root_ / "out" / "errors.json").find("broken.png"), std::string::npos);
}

TEST_F(GenerateDataset, MissingInputDirectory) {
  EXPECT_THROW(generate_dataset(root_ / "nope", root_ / "out", small_options()), Error);
}

}  // namespace
}  // namespace rdcalib
