#include <cstdio>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib::cli {

namespace {

struct CalibrateArgs {
  std::string corr_dir;
  std::string predictions;
  std::size_t n_frames = 100;
  double f_prior = 1.0;
  double cx_prior = 0.5;
  double cy_prior = 0.5;
  std::vector<int> pixel_size;
  double threshold = 2e-4;
  double confidence = 0.999;
  int max_iterations = 2000;
  std::uint64_t seed = 0;
  std::vector<double> lambda_range{-1.0, 0.0};
  std::vector<int> full_size;
  double crop_aspect = 0.0;
  std::string camera_out;
  std::vector<int> out_size;
  double out_f = 0.0;
  std::string log_out;
};

void run(const CalibrateArgs& a) {
  GeometricOptions opts;
  opts.n_frames = a.n_frames;
  opts.f_prior = a.f_prior;
  opts.cx_prior = a.cx_prior;
  opts.cy_prior = a.cy_prior;
  opts.ransac.threshold = a.threshold;
  opts.ransac.confidence = a.confidence;
  opts.ransac.max_iterations = a.max_iterations;
  opts.ransac.seed = a.seed;
  opts.ransac.lambda_range = {a.lambda_range[0], a.lambda_range[1]};
  if (!a.pixel_size.empty()) opts.pixel_size = std::make_pair(a.pixel_size[0], a.pixel_size[1]);

  const bool geometric = !a.corr_dir.empty();
  auto result = calibrate_sequence(geometric ? a.corr_dir : a.predictions,
                                   geometric ? CalibrationMethod::Geometric : CalibrationMethod::Predictions, opts);

  if (!a.full_size.empty()) {
    const auto crop = center_crop_to_aspect(a.full_size[0], a.full_size[1], a.crop_aspect);
    result.estimate = uncrop_estimate(result.estimate, crop, a.full_size[0], a.full_size[1]);
  }

  nlohmann::ordered_json out;
  out["estimate"] = estimate_json(result.estimate);
  out["frames_used"] = result.frames.size() - static_cast<std::size_t>(result.failures);
  out["failures"] = result.failures;
  std::cout << out.dump(2) << "\n";

  if (!a.log_out.empty()) {
    nlohmann::ordered_json log = nlohmann::ordered_json::array();
    for (const auto& f : result.frames) {
      nlohmann::ordered_json j;
      j["frame"] = f.frame;
      j["ok"] = f.ok;
      if (f.ok) {
        j["estimate"] = estimate_json(f.estimate);
        if (geometric) j["inliers"] = f.inliers;
      } else {
        j["error"] = f.error;
      }
      log.push_back(std::move(j));
    }
    write_file(a.log_out, log.dump(2) + "\n");
  }

  if (!a.camera_out.empty()) {
    if (a.out_size.empty()) throw Error(ErrorCode::InvalidArgument, "--camera-out needs --out-size");
    const CameraIntrinsics out_k{a.out_f > 0.0 ? a.out_f : result.estimate.f, 0.5, 0.5, a.out_size[0], a.out_size[1]};
    export_camera_file(result.estimate, out_k, a.camera_out);
  }
  for (const auto& f : result.frames) {
    if (!f.ok) std::fprintf(stderr, "warning: %s: %s\n", f.frame.c_str(), f.error.c_str());
  }
}

}  // namespace

void add_calibrate(CLI::App& app) {
  auto args = std::make_shared<CalibrateArgs>();
  auto* sub = app.add_subcommand("calibrate", "Per-frame calibration and median aggregation");
  sub->footer(
      "Geometric mode (--corr-dir) runs RANSAC on every `x1 y1 x2 y2` file and estimates lambda only;\n"
      "f, cx and cy are taken from the priors. Predictions mode (--predictions) aggregates all four\n"
      "parameters from a JSON array of {frame, lambda, f, cx, cy}.\n\n"
      "With --full-size W,H and --crop-aspect A the predictions are taken to refer to a centered crop of\n"
      "aspect A (width / height) of a W x H image, and are converted back with\n"
      "  f  = f_crop * crop_width / W\n"
      "  cx = (cx_crop * crop_width + x0) / W\n"
      "  cy = (cy_crop * crop_height + y0) / H\n"
      "  lambda unchanged.");
  auto* input = sub->add_option_group("input");
  input->add_option("--corr-dir", args->corr_dir, "Directory of correspondence files, one per frame pair")
      ->check(CLI::ExistingDirectory);
  input->add_option("--predictions", args->predictions, "Predictions JSON file");
  input->require_option(1);
  sub->add_option("--n-frames", args->n_frames, "Use the first N frames")->capture_default_str();
  sub->add_option("--f-prior", args->f_prior, "Focal length prior, width-normalized")->capture_default_str();
  sub->add_option("--cx-prior", args->cx_prior, "Principal point x prior, width-normalized")->capture_default_str();
  sub->add_option("--cy-prior", args->cy_prior, "Principal point y prior, height-normalized")->capture_default_str();
  sub->add_option("--pixel-size", args->pixel_size, "Correspondences are in pixels of a W,H image")
      ->expected(2)
      ->delimiter(',')
      ->type_name("W,H");
  sub->add_option("--threshold", args->threshold, "RANSAC Sampson threshold, normalized units")
      ->capture_default_str();
  sub->add_option("--confidence", args->confidence, "RANSAC confidence")->capture_default_str();
  sub->add_option("--max-iterations", args->max_iterations, "RANSAC iteration budget")->capture_default_str();
  sub->add_option("--seed", args->seed, "RANSAC seed")->capture_default_str();
  add_interval(*sub, "--lambda-range", args->lambda_range, "Admissible lambda interval")->capture_default_str();
  sub->add_option("--full-size", args->full_size, "Full image size for crop conversion")
      ->expected(2)
      ->delimiter(',')
      ->type_name("W,H");
  sub->add_option("--crop-aspect", args->crop_aspect, "Aspect ratio of the centered crop");
  sub->add_option("--camera-out", args->camera_out, "Write a camera file for undistorted frames");
  sub->add_option("--out-size", args->out_size, "Undistorted frame size for the camera file")
      ->expected(2)
      ->delimiter(',')
      ->type_name("W,H");
  sub->add_option("--out-f", args->out_f, "Undistorted focal length, width-normalized (default: estimate)");
  sub->add_option("--log", args->log_out, "Write the per-frame log as JSON");
  sub->callback([args] {
    if (!args->full_size.empty() && !(args->crop_aspect > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "--full-size needs --crop-aspect");
    }
    run(*args);
  });
}

}  // namespace rdcalib::cli
