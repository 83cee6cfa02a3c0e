#include "rdcalib/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rdcalib/error.hpp"

namespace rdcalib {

namespace fs = std::filesystem;

namespace {

double lower_median(std::vector<double> values) {
  const std::size_t k = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

CalibrationEstimate aggregate(std::span<const CalibrationEstimate> per_frame, std::size_t n_frames) {
  const std::size_t n = std::min(n_frames, per_frame.size());
  if (n == 0) throw Error(ErrorCode::EmptyInput, "no per-frame estimates to aggregate");

  std::vector<double> lambda, f, cx, cy;
  for (std::size_t i = 0; i < n; ++i) {
    lambda.push_back(per_frame[i].lambda);
    f.push_back(per_frame[i].f);
    cx.push_back(per_frame[i].cx);
    cy.push_back(per_frame[i].cy);
  }
  return {lower_median(lambda), lower_median(f), lower_median(cx), lower_median(cy), per_frame.front().provenance};
}

RelativeErrors relative_errors(const CalibrationEstimate& est, const CalibrationEstimate& gt) {
  if (gt.lambda == 0.0 || gt.f == 0.0 || gt.cx == 0.0 || gt.cy == 0.0) {
    throw Error(ErrorCode::ZeroGroundTruth, "relative error undefined for zero ground-truth parameters");
  }
  return {std::abs(est.lambda - gt.lambda) / std::abs(gt.lambda), std::abs(est.f - gt.f) / std::abs(gt.f),
          std::abs(est.cx - gt.cx) / std::abs(gt.cx), std::abs(est.cy - gt.cy) / std::abs(gt.cy)};
}

std::vector<CdfPoint> cdf(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorCode::EmptyInput, "cdf of an empty list");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  out.back().fraction = 1.0;
  return out;
}

SequenceResult calibrate_geometric(const fs::path& corr_dir, const GeometricOptions& options) {
  if (!fs::is_directory(corr_dir)) throw Error(ErrorCode::MissingInput, "correspondence directory not found: " + corr_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corr_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::MissingInput, "no correspondence files in " + corr_dir.string());
  if (files.size() > options.n_frames) files.resize(options.n_frames);

  SequenceResult result;
  std::vector<CalibrationEstimate> ok;
  for (const auto& file : files) {
    FrameLog log;
    log.frame = file.stem().string();
    try {
      auto corrs = read_correspondences(file);
      if (options.pixel_size) {
        const CameraIntrinsics k{options.f_prior, options.cx_prior, options.cy_prior, options.pixel_size->first,
                                 options.pixel_size->second};
        for (auto& c : corrs) {
          c.p1 = pixel_to_normalized({c.p1.x, c.p1.y}, k);
          c.p2 = pixel_to_normalized({c.p2.x, c.p2.y}, k);
        }
      }
      const auto est = estimate(corrs, options.ransac);
      log.ok = true;
      log.inliers = est.inlier_count;
      log.estimate = {est.lambda, options.f_prior, options.cx_prior, options.cy_prior, Provenance::Geometric};
      ok.push_back(log.estimate);
    } catch (const Error& e) {
      log.error = e.what();
      ++result.failures;
    }
    result.frames.push_back(std::move(log));
  }
  if (ok.empty()) throw Error(ErrorCode::MissingInput, "no frame pair produced an estimate");
  result.estimate = aggregate(ok, ok.size());
  return result;
}

SequenceResult calibrate_predictions(std::span<const Prediction> predictions, std::size_t n_frames) {
  if (predictions.empty()) throw Error(ErrorCode::MissingInput, "predictions file has no records");
  SequenceResult result;
  std::vector<CalibrationEstimate> estimates;
  const std::size_t n = std::min(n_frames, predictions.size());
  for (std::size_t i = 0; i < n; ++i) {
    estimates.push_back(predictions[i].second);
    result.frames.push_back({predictions[i].first, true, predictions[i].second, 0, {}});
  }
  result.estimate = aggregate(estimates, n);
  return result;
}

SequenceResult calibrate_sequence(const fs::path& input, CalibrationMethod method, const GeometricOptions& options) {
  if (method == CalibrationMethod::Geometric) return calibrate_geometric(input, options);
  if (!fs::exists(input)) throw Error(ErrorCode::MissingInput, "predictions file not found: " + input.string());
  const auto preds = read_predictions(input);
  return calibrate_predictions(preds, options.n_frames);
}

Image undistort_image(const Image& img, const CalibrationEstimate& est, const CameraIntrinsics& out_k) {
  const auto src_k = est.intrinsics(img.width, img.height);
  const auto model = DistortionModel::division(est.lambda);
  Image out(out_k.width, out_k.height, img.channels);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const auto undistorted = pixel_to_normalized({x + 0.5, y + 0.5}, out_k);
      NormalizedPoint distorted;
      try {
        distorted = distort_point(undistorted, model);
      } catch (const Error&) {
        continue;
      }
      const auto px = normalized_to_pixel(distorted, src_k);
      sample_bilinear(img, px.u, px.v, &out.at(x, y));
    }
  }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, res.ptr);
  if (std::isfinite(value) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

CameraFile camera_file_for(const CameraIntrinsics& out_k) {
  CameraFile cam;
  cam.fx = out_k.focal_pixels();
  cam.fy = out_k.focal_pixels();
  cam.cx = out_k.cx_pixels();
  cam.cy = out_k.cy_pixels();
  cam.distortion.assign(5, 0.0);
  cam.width = out_k.width;
  cam.height = out_k.height;
  return cam;
}

std::string format_camera_file(const CameraFile& cam) {
  std::ostringstream out;
  out << format_number(cam.fx) << ' ' << format_number(cam.fy) << ' ' << format_number(cam.cx) << ' '
      << format_number(cam.cy) << '\n';
  for (std::size_t i = 0; i < cam.distortion.size(); ++i) {
    if (i) out << ' ';
    const double d = cam.distortion[i];
    out << (d == 0.0 ? std::string("0") : format_number(d));
  }
  out << '\n' << cam.width << ' ' << cam.height << '\n';
  return out.str();
}

CameraFile parse_camera_file(const std::string& text) {
  std::istringstream in(text);
  std::string line1, line2, line3;
  if (!std::getline(in, line1) || !std::getline(in, line2) || !std::getline(in, line3)) {
    throw Error(ErrorCode::IoError, "camera file needs three lines");
  }
  CameraFile cam;
  std::istringstream l1(line1);
  if (!(l1 >> cam.fx >> cam.fy >> cam.cx >> cam.cy)) throw Error(ErrorCode::IoError, "bad intrinsics line");
  std::istringstream l2(line2);
  double d = 0.0;
  while (l2 >> d) cam.distortion.push_back(d);
  std::istringstream l3(line3);
  if (!(l3 >> cam.width >> cam.height)) throw Error(ErrorCode::IoError, "bad size line");
  return cam;
}

void export_camera_file(const CalibrationEstimate& est, const CameraIntrinsics& out_k, const fs::path& path) {
  if (!(est.f > 0.0) || !std::isfinite(est.lambda)) throw Error(ErrorCode::InvalidArgument, "invalid estimate");
  out_k.validate();
  write_text(path, format_camera_file(camera_file_for(out_k)));
}

CameraFile read_camera_file(const fs::path& path) { return parse_camera_file(read_text(path)); }

std::vector<Correspondence> parse_correspondences(const std::string& text) {
  std::vector<Correspondence> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Correspondence c;
    if (!(ls >> c.p1.x >> c.p1.y >> c.p2.x >> c.p2.y) || !c.p1.finite() || !c.p2.finite()) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected four finite numbers";
      throw Error(ErrorCode::IoError, msg.str());
    }
    out.push_back(c);
  }
  return out;
}

std::vector<Correspondence> read_correspondences(const fs::path& path) {
  return parse_correspondences(read_text(path));
}

std::string format_correspondences(std::span<const Correspondence> corrs) {
  std::ostringstream out;
  for (const auto& c : corrs) {
    out << format_number(c.p1.x) << ' ' << format_number(c.p1.y) << ' ' << format_number(c.p2.x) << ' '
        << format_number(c.p2.y) << '\n';
  }
  return out.str();
}

std::vector<Prediction> parse_predictions(const std::string& text, Provenance provenance) {
  std::vector<Prediction> out;
  try {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw Error(ErrorCode::IoError, "predictions must be a JSON array");
    for (const auto& j : arr) {
      std::string frame = j.contains("frame") ? j.at("frame").get<std::string>() : j.at("image").get<std::string>();
      CalibrationEstimate est{j.at("lambda").get<double>(), j.at("f").get<double>(), j.at("cx").get<double>(),
                              j.at("cy").get<double>(), provenance};
      out.emplace_back(std::move(frame), est);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed predictions: ") + e.what());
  }
  return out;
}

std::vector<Prediction> read_predictions(const fs::path& path, Provenance provenance) {
  return parse_predictions(read_text(path), provenance);
}

std::string format_predictions(std::span<const Prediction> predictions) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [frame, est] : predictions) {
    arr.push_back({{"frame", frame}, {"lambda", est.lambda}, {"f", est.f}, {"cx", est.cx}, {"cy", est.cy}});
  }
  return arr.dump(2) + "\n";
}

CropWindow center_crop_to_aspect(int width, int height, double aspect) {
  if (width < 1 || height < 1 || !(aspect > 0.0)) throw Error(ErrorCode::InvalidArgument, "invalid crop request");
  CropWindow crop{0, 0, width, height};
  if (static_cast<double>(width) / height > aspect) {
    crop.width = std::max(1, static_cast<int>(std::lround(height * aspect)));
    crop.x0 = (width - crop.width) / 2;
  } else {
    crop.height = std::max(1, static_cast<int>(std::lround(width / aspect)));
    crop.y0 = (height - crop.height) / 2;
  }
  return crop;
}

CalibrationEstimate uncrop_estimate(const CalibrationEstimate& on_crop, const CropWindow& crop, int width,
                                    int height) {
  CalibrationEstimate out = on_crop;
  out.f = on_crop.f * crop.width / width;
  out.cx = (on_crop.cx * crop.width + crop.x0) / width;
  out.cy = (on_crop.cy * crop.height + crop.y0) / height;
  return out;
}

}  // namespace rdcalib
