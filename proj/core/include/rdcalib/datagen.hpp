#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rdcalib/distortion.hpp"
#include "rdcalib/image.hpp"

namespace rdcalib {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  double width() const noexcept { return hi - lo; }
};

// Sampling ranges for synthetic uncalibrated images. f and cx are normalized
// by image width, cy by image height.
struct ParamRanges {
  Interval cx{0.45, 0.55};
  Interval cy{0.45, 0.55};
  Interval f{0.6, 1.8};
  Interval lambda{-1.0, 0.0};
  int per_image_count = 10;

  /// Throws InvalidArgument on an empty interval or negative count.
  void validate() const;
};

struct SampledParams {
  double lambda = 0.0;
  double f = 1.0;
  double cx = 0.5;
  double cy = 0.5;
};

/// Independent uniform draws; a pure function of (seed, index).
SampledParams sample_params(const ParamRanges& ranges, std::uint64_t seed, std::uint64_t index);

/// Renders a distorted view of a calibrated source image. Every destination
/// pixel center goes through dst intrinsics, the destination undistortion,
/// source intrinsics, and a bilinear lookup; unmapped pixels stay black.
/// Throws EmptyOverlap when no destination pixel lands inside the source.
Image warp_image(const Image& src, const CameraIntrinsics& src_k, const CameraIntrinsics& dst_k,
                 const DistortionModel& dst_model);

struct LabeledImage {
  std::string image;   // file name relative to the output directory
  std::string source;  // source file name relative to the input directory
  double lambda = 0.0;
  double f = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 0;
  int height = 0;
  // Intrinsics assumed for the calibrated source image.
  double source_f = 0.0;
  double source_cx = 0.5;
  double source_cy = 0.5;
};

struct DatagenError {
  std::string source;
  std::string message;
};

struct DatagenOptions {
  ParamRanges ranges;
  std::uint64_t seed = 0;
  int out_width = 960;
  int out_height = 320;
  // Intrinsics of the calibrated inputs (width/height taken from each file).
  double source_f = 0.58;
  double source_cx = 0.5;
  double source_cy = 0.5;
};

struct Manifest {
  std::vector<LabeledImage> records;
  std::vector<DatagenError> errors;
  int skipped_existing = 0;
};

/// Renders per_image_count labeled images for every PNG in input_dir (sorted by
/// name) and writes output_dir/manifest.json. Existing outputs are kept and
/// only re-listed; per-file failures go to output_dir/errors.json.
Manifest generate_dataset(const std::filesystem::path& input_dir, const std::filesystem::path& output_dir,
                          const DatagenOptions& options);

/// Manifest JSON text (array of records, fixed key order).
std::string manifest_to_json(const std::vector<LabeledImage>& records);
std::vector<LabeledImage> manifest_from_json(const std::string& text);

/// Rebuilds the intrinsics/model of a manifest record.
CameraIntrinsics record_intrinsics(const LabeledImage& record);
CameraIntrinsics record_source_intrinsics(const LabeledImage& record, int source_width, int source_height);

}  // namespace rdcalib
