#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib::cli {

namespace {

namespace fs = std::filesystem;

struct UndistortArgs {
  std::string input;
  std::string output;
  std::string estimate;
  double lambda = 0.0;
  double f = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  double out_f = 0.0;
  std::vector<int> out_size;
  std::string camera_out;
};

CalibrationEstimate load_estimate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  try {
    auto j = nlohmann::json::parse(in);
    if (j.contains("estimate")) j = j.at("estimate");
    return {j.at("lambda").get<double>(), j.at("f").get<double>(), j.at("cx").get<double>(),
            j.at("cy").get<double>(), Provenance::Learned};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, "malformed estimate " + path + ": " + e.what());
  }
}

std::vector<std::pair<fs::path, fs::path>> jobs(const UndistortArgs& a) {
  std::vector<std::pair<fs::path, fs::path>> out;
  if (!fs::is_directory(a.input)) {
    out.emplace_back(a.input, a.output);
    return out;
  }
  fs::create_directories(a.output);
  for (const auto& entry : fs::directory_iterator(a.input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      out.emplace_back(entry.path(), fs::path(a.output) / entry.path().filename());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void run(const UndistortArgs& a, bool from_flags) {
  const auto est =
      from_flags ? CalibrationEstimate{a.lambda, a.f, a.cx, a.cy, Provenance::Learned} : load_estimate(a.estimate);
  const auto work = jobs(a);
  if (work.empty()) throw Error(ErrorCode::MissingInput, "no PNG files in " + a.input);
  CameraIntrinsics last{};
  for (const auto& [src, dst] : work) {
    const auto img = read_png(src);
    const int w = a.out_size.empty() ? img.width : a.out_size[0];
    const int h = a.out_size.empty() ? img.height : a.out_size[1];
    const CameraIntrinsics out_k{a.out_f > 0.0 ? a.out_f : est.f, 0.5, 0.5, w, h};
    out_k.validate();
    write_png(dst, undistort_image(img, est, out_k));
    last = out_k;
  }
  if (!a.camera_out.empty()) export_camera_file(est, last, a.camera_out);
  std::cout << "undistorted " << work.size() << " image(s)\n";
}

}  // namespace

void add_undistort(CLI::App& app) {
  auto args = std::make_shared<UndistortArgs>();
  auto* sub = app.add_subcommand("undistort", "Render pinhole images from distorted ones");
  sub->footer(
      "Each output pixel goes through the output intrinsics (principal point at the image center),\n"
      "the division-model distortion and the estimate's intrinsics on the input image.\n"
      "Pixels with no source are black.");
  sub->add_option("--input", args->input, "Input PNG or directory of PNGs")->required()->check(CLI::ExistingPath);
  sub->add_option("--output", args->output, "Output PNG or directory")->required();
  auto* est = sub->add_option("--estimate", args->estimate, "Estimate JSON (calibrate output or a single record)")
                  ->check(CLI::ExistingFile);
  auto* lambda = sub->add_option("--lambda", args->lambda, "Distortion parameter");
  sub->add_option("--f", args->f, "Focal length, width-normalized")->capture_default_str();
  sub->add_option("--cx", args->cx, "Principal point x, width-normalized")->capture_default_str();
  sub->add_option("--cy", args->cy, "Principal point y, height-normalized")->capture_default_str();
  est->excludes(lambda);
  sub->add_option("--out-f", args->out_f, "Output focal length, width-normalized (default: estimate)");
  sub->add_option("--out-size", args->out_size, "Output size (default: input size)")
      ->expected(2)
      ->delimiter(',')
      ->type_name("W,H");
  sub->add_option("--camera-out", args->camera_out, "Write the camera file of the output images");
  sub->callback([args, est] { run(*args, est->count() == 0); });
}

}  // namespace rdcalib::cli
