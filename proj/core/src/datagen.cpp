#include "rdcalib/datagen.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "rdcalib/error.hpp"
#include "rdcalib/random.hpp"

namespace rdcalib {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ParamRanges::validate() const {
  for (const auto* iv : {&cx, &cy, &f, &lambda}) {
    if (!(iv->lo <= iv->hi)) throw Error(ErrorCode::InvalidArgument, "parameter range is empty");
  }
  if (per_image_count < 0) throw Error(ErrorCode::InvalidArgument, "per-image count must be >= 0");
}

SampledParams sample_params(const ParamRanges& ranges, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  SampledParams p;
  p.lambda = rng.uniform(ranges.lambda.lo, ranges.lambda.hi);
  p.f = rng.uniform(ranges.f.lo, ranges.f.hi);
  p.cx = rng.uniform(ranges.cx.lo, ranges.cx.hi);
  p.cy = rng.uniform(ranges.cy.lo, ranges.cy.hi);
  return p;
}

Image warp_image(const Image& src, const CameraIntrinsics& src_k, const CameraIntrinsics& dst_k,
                 const DistortionModel& dst_model) {
  Image dst(dst_k.width, dst_k.height, src.channels);
  bool any_inside = false;
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      const auto distorted = pixel_to_normalized({x + 0.5, y + 0.5}, dst_k);
      NormalizedPoint undistorted;
      try {
        undistorted = undistort_point(distorted, dst_model);
      } catch (const Error&) {
        continue;
      }
      const auto px = normalized_to_pixel(undistorted, src_k);
      if (sample_bilinear(src, px.u, px.v, &dst.at(x, y))) any_inside = true;
    }
  }
  if (!any_inside) throw Error(ErrorCode::EmptyOverlap, "no destination pixel maps inside the source image");
  return dst;
}

std::string manifest_to_json(const std::vector<LabeledImage>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json j;
    j["image"] = r.image;
    j["source"] = r.source;
    j["lambda"] = r.lambda;
    j["f"] = r.f;
    j["cx"] = r.cx;
    j["cy"] = r.cy;
    j["width"] = r.width;
    j["height"] = r.height;
    j["source_f"] = r.source_f;
    j["source_cx"] = r.source_cx;
    j["source_cy"] = r.source_cy;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<LabeledImage> manifest_from_json(const std::string& text) {
  std::vector<LabeledImage> records;
  try {
    const auto arr = nlohmann::json::parse(text);
    for (const auto& j : arr) {
      LabeledImage r;
      r.image = j.at("image").get<std::string>();
      r.source = j.value("source", std::string{});
      r.lambda = j.at("lambda").get<double>();
      r.f = j.at("f").get<double>();
      r.cx = j.at("cx").get<double>();
      r.cy = j.at("cy").get<double>();
      r.width = j.at("width").get<int>();
      r.height = j.at("height").get<int>();
      r.source_f = j.value("source_f", 0.0);
      r.source_cx = j.value("source_cx", 0.5);
      r.source_cy = j.value("source_cy", 0.5);
      records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed manifest: ") + e.what());
  }
  return records;
}

CameraIntrinsics record_intrinsics(const LabeledImage& record) {
  return {record.f, record.cx, record.cy, record.width, record.height};
}

CameraIntrinsics record_source_intrinsics(const LabeledImage& record, int source_width, int source_height) {
  return {record.source_f, record.source_cx, record.source_cy, source_width, source_height};
}

namespace {

std::vector<fs::path> list_pngs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "input directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string output_name(const fs::path& source, int k) {
  std::ostringstream name;
  name << source.stem().string() << "_" << (k < 10 ? "0" : "") << k << ".png";
  return name.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

}  // namespace

Manifest generate_dataset(const fs::path& input_dir, const fs::path& output_dir, const DatagenOptions& options) {
  options.ranges.validate();
  const auto inputs = list_pngs(input_dir);
  fs::create_directories(output_dir);

  Manifest manifest;
  const auto count = static_cast<std::uint64_t>(options.ranges.per_image_count);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& source = inputs[i];
    std::optional<Image> src;
    for (int k = 0; k < options.ranges.per_image_count; ++k) {
      const auto params = sample_params(options.ranges, options.seed, i * count + static_cast<std::uint64_t>(k));
      LabeledImage rec;
      rec.image = output_name(source, k);
      rec.source = source.filename().string();
      rec.lambda = params.lambda;
      rec.f = params.f;
      rec.cx = params.cx;
      rec.cy = params.cy;
      rec.width = options.out_width;
      rec.height = options.out_height;
      rec.source_f = options.source_f;
      rec.source_cx = options.source_cx;
      rec.source_cy = options.source_cy;

      const auto out_path = output_dir / rec.image;
      if (fs::exists(out_path)) {
        ++manifest.skipped_existing;
        manifest.records.push_back(std::move(rec));
        continue;
      }
      try {
        if (!src) src = read_png(source);
        const auto src_k = record_source_intrinsics(rec, src->width, src->height);
        const auto img = warp_image(*src, src_k, record_intrinsics(rec), DistortionModel::division(rec.lambda));
        write_png(out_path, img);
        manifest.records.push_back(std::move(rec));
      } catch (const Error& e) {
        manifest.errors.push_back({rec.source + ":" + rec.image, e.what()});
        // An unreadable source fails every remaining sample the same way.
        if (!src) break;
      }
    }
  }

  write_text(output_dir / "manifest.json", manifest_to_json(manifest.records));
  ordered_json errs = ordered_json::array();
  for (const auto& e : manifest.errors) errs.push_back({{"source", e.source}, {"error", e.message}});
  write_text(output_dir / "errors.json", errs.dump(2) + "\n");
  return manifest;
}

}  // namespace rdcalib
