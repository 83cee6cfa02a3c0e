#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdcalib/distortion.hpp"
#include "rdcalib/image.hpp"
#include "rdcalib/ransac.hpp"
#include "rdcalib/twoview.hpp"

namespace rdcalib {

enum class Provenance { Geometric, Learned, GroundTruth };

struct CalibrationEstimate {
  double lambda = 0.0;
  double f = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  Provenance provenance = Provenance::GroundTruth;

  /// Intrinsics of the (distorted) image this estimate describes.
  CameraIntrinsics intrinsics(int width, int height) const { return {f, cx, cy, width, height}; }
};

/// Component-wise lower median of the first min(n_frames, size) estimates.
/// Throws EmptyInput.
CalibrationEstimate aggregate(std::span<const CalibrationEstimate> per_frame, std::size_t n_frames);

struct RelativeErrors {
  double lambda = 0.0;
  double f = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

/// |x - x_gt| / |x_gt| per parameter. Throws ZeroGroundTruth.
RelativeErrors relative_errors(const CalibrationEstimate& est, const CalibrationEstimate& gt);

struct CdfPoint {
  double threshold = 0.0;
  double fraction = 0.0;
};

/// Empirical CDF evaluated at the sorted unique values. Throws EmptyInput.
std::vector<CdfPoint> cdf(std::span<const double> errors);

struct FrameLog {
  std::string frame;
  bool ok = false;
  CalibrationEstimate estimate;
  int inliers = 0;
  std::string error;
};

struct SequenceResult {
  CalibrationEstimate estimate;
  std::vector<FrameLog> frames;
  int failures = 0;
};

struct GeometricOptions {
  RansacConfig ransac;
  std::size_t n_frames = 100;
  // Priors for the parameters the two-view solver cannot observe.
  double f_prior = 1.0;
  double cx_prior = 0.5;
  double cy_prior = 0.5;
  // When set, correspondence files hold pixel coordinates and are normalized
  // with the priors at this image size.
  std::optional<std::pair<int, int>> pixel_size;
};

/// Runs RANSAC on every correspondence file (sorted by name, one file per
/// consecutive frame pair) and aggregates lambda. Per-pair failures are
/// logged and counted. Throws MissingInput when the directory has no files or
/// every pair failed.
SequenceResult calibrate_geometric(const std::filesystem::path& corr_dir, const GeometricOptions& options);

/// Aggregates all four parameters from predictions records. Throws MissingInput.
SequenceResult calibrate_predictions(std::span<const std::pair<std::string, CalibrationEstimate>> predictions,
                                     std::size_t n_frames);

enum class CalibrationMethod { Geometric, Predictions };

/// Geometric mode reads a directory of correspondence files; predictions mode
/// reads a predictions JSON file.
SequenceResult calibrate_sequence(const std::filesystem::path& input, CalibrationMethod method,
                                  const GeometricOptions& options);

/// Pinhole rendering of a distorted image: each output pixel goes through
/// out_k, the forward distortion and the estimate's intrinsics on the input
/// image. Unmapped pixels stay black.
Image undistort_image(const Image& img, const CalibrationEstimate& est, const CameraIntrinsics& out_k);

// Plain-text camera file for a SLAM system running on undistorted frames:
//   fx fy cx cy      (pixels)
//   0 0 0 0 0        (distortion)
//   width height
struct CameraFile {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  std::vector<double> distortion;
  int width = 0;
  int height = 0;
};

CameraFile camera_file_for(const CameraIntrinsics& out_k);
std::string format_camera_file(const CameraFile& cam);
CameraFile parse_camera_file(const std::string& text);

/// Writes the camera file of the undistorted output intrinsics. Throws IoError.
void export_camera_file(const CalibrationEstimate& est, const CameraIntrinsics& out_k,
                        const std::filesystem::path& path);
CameraFile read_camera_file(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double, with a trailing
/// ".0" for integral values.
std::string format_number(double value);

// Correspondence files: one `x1 y1 x2 y2` line per pair; blank lines and lines
// starting with '#' are ignored.
std::vector<Correspondence> parse_correspondences(const std::string& text);
std::vector<Correspondence> read_correspondences(const std::filesystem::path& path);
std::string format_correspondences(std::span<const Correspondence> corrs);

// Predictions JSON: array of {frame, lambda, f, cx, cy}.
using Prediction = std::pair<std::string, CalibrationEstimate>;
std::vector<Prediction> parse_predictions(const std::string& text, Provenance provenance = Provenance::Learned);
std::vector<Prediction> read_predictions(const std::filesystem::path& path,
                                         Provenance provenance = Provenance::Learned);
std::string format_predictions(std::span<const Prediction> predictions);

// Centered crop of an image to a target aspect ratio (width / height).
struct CropWindow {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
};

CropWindow center_crop_to_aspect(int width, int height, double aspect);

/// Converts an estimate made on a crop (after any uniform resize) back to the
/// full image:
///   f  = f_crop * crop_width / width
///   cx = (cx_crop * crop_width + x0) / width
///   cy = (cy_crop * crop_height + y0) / height
///   lambda unchanged (defined on the normalized plane)
CalibrationEstimate uncrop_estimate(const CalibrationEstimate& on_crop, const CropWindow& crop, int width,
                                    int height);

}  // namespace rdcalib
