#include <algorithm>
#include <cstdio>
#include <memory>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "rdcalib/degeneracy.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib::cli {

namespace {

struct DegeneracyArgs {
  int scenes = 100;
  int fakes = 100;
  int points = 50;
  std::vector<double> z_range{1.5, 30.0};
  std::vector<double> true_range{-0.9, -0.1};
  std::vector<double> fake_range{-1.0, 1.0};
  int trials = 500;
  double noise_px = 0.5;
  double width_px = 1242.0;
  double lambda = -0.39;
  std::string mode = "minimal";
  int bins = 50;
  std::uint64_t seed = 0;
  bool skip_ambiguity = false;
  bool skip_spread = false;
  std::string json_out;
  std::string hist_out;
};

nlohmann::ordered_json ambiguity(const DegeneracyArgs& a) {
  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> truth(a.true_range[0], a.true_range[1]);
  std::uniform_real_distribution<double> fake(a.fake_range[0], a.fake_range[1]);
  ForwardSceneOptions opts;
  opts.num_points = a.points;
  opts.z_min = a.z_range[0];
  opts.z_max = a.z_range[1];
  const auto id = DistortionModel::identity();

  double worst = 0.0;
  double worst_pinhole = 0.0;
  long checked = 0;
  long rejected = 0;
  long violations = 0;
  for (int s = 0; s < a.scenes; ++s) {
    const auto [scene, corrs] = generate_forward_scene(opts, DistortionModel::division(truth(rng)),
                                                       DistortionModel::division(truth(rng)), a.seed + s);
    worst_pinhole = std::max(worst_pinhole, verify_ambiguity(scene, corrs, make_fake_solution(scene, corrs, id, id)));
    for (int k = 0; k < a.fakes; ++k) {
      try {
        const auto sol = make_fake_solution(scene, corrs, DistortionModel::division(fake(rng)),
                                            DistortionModel::division(fake(rng)));
        worst = std::max(worst, verify_ambiguity(scene, corrs, sol));
        violations += std::count(sol.cheirality_violation.begin(), sol.cheirality_violation.end(), true);
        ++checked;
      } catch (const Error&) {
        ++rejected;
      }
    }
  }
  std::printf("ambiguity: %ld fake solutions over %d scenes, max residual %.3g (pinhole %.3g), %ld undefined, "
              "%ld cheirality-violating depths\n",
              checked, a.scenes, worst, worst_pinhole, rejected, violations);
  nlohmann::ordered_json j;
  j["scenes"] = a.scenes;
  j["fake_solutions"] = checked;
  j["undefined_fakes"] = rejected;
  j["max_residual"] = worst;
  j["max_residual_pinhole"] = worst_pinhole;
  j["cheirality_violations"] = violations;
  return j;
}

SpreadSummary spread(const DegeneracyArgs& a, MotionKind motion) {
  SpreadOptions o;
  o.mode = a.mode == "ransac" ? SpreadMode::PerRansac : SpreadMode::PerMinimalSample;
  o.num_trials = a.trials;
  o.seed = a.seed;
  o.histogram_bins = a.bins;
  o.scene.motion = motion;
  o.scene.lambda = a.lambda;
  o.scene.noise_sigma = pixel_sigma_to_normalized(a.noise_px, a.width_px);
  return lambda_spread_experiment(o);
}

nlohmann::ordered_json summary_json(const SpreadSummary& s) {
  nlohmann::ordered_json j;
  j["estimates"] = s.estimates.size();
  j["failed_trials"] = s.failed_trials;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["histogram"] = s.histogram;
  return j;
}

void run(const DegeneracyArgs& a) {
  nlohmann::ordered_json out;
  if (!a.skip_ambiguity) out["ambiguity"] = ambiguity(a);
  if (!a.skip_spread) {
    const auto side = spread(a, MotionKind::Sideways);
    const auto fwd = spread(a, MotionKind::Forward);
    const double ratio = side.stddev > 0.0 ? fwd.stddev / side.stddev : 0.0;
    std::printf("spread (%s, %.3g px, lambda %.3g): sideways mean %.4f std %.4f, forward mean %.4f std %.4f, "
                "ratio %.2f\n",
                a.mode.c_str(), a.noise_px, a.lambda, side.mean, side.stddev, fwd.mean, fwd.stddev, ratio);
    nlohmann::ordered_json s;
    s["mode"] = a.mode;
    s["noise_px"] = a.noise_px;
    s["lambda_true"] = a.lambda;
    s["hist_range"] = {side.hist_lo, side.hist_hi};
    s["sideways"] = summary_json(side);
    s["forward"] = summary_json(fwd);
    s["stddev_ratio"] = ratio;
    out["spread"] = s;

    if (!a.hist_out.empty()) {
      std::ostringstream text;
      text << "# bin_lo bin_hi sideways forward\n";
      const double width = (side.hist_hi - side.hist_lo) / a.bins;
      for (int b = 0; b < a.bins; ++b) {
        text << format_number(side.hist_lo + b * width) << ' ' << format_number(side.hist_lo + (b + 1) * width) << ' '
             << side.histogram[b] << ' ' << fwd.histogram[b] << '\n';
      }
      write_file(a.hist_out, text.str());
    }
  }
  if (!a.json_out.empty()) write_file(a.json_out, out.dump(2) + "\n");
}

}  // namespace

void add_degeneracy(CLI::App& app) {
  auto args = std::make_shared<DegeneracyArgs>();
  auto* sub = app.add_subcommand("degeneracy", "Forward-motion ambiguity check and lambda spread experiment");
  sub->footer(
      "The ambiguity check builds forward-motion scenes and, for random fake division models in both views,\n"
      "the compensating fake depths; it reports the largest residual of the forward-motion relation.\n"
      "The spread experiment collects lambda estimates from minimal samples (or full RANSAC runs) of\n"
      "sideways and forward synthetic motion with the same noise and compares their spread.");
  sub->add_option("--scenes", args->scenes, "Forward scenes")->capture_default_str();
  sub->add_option("--fakes", args->fakes, "Fake distortion pairs per scene")->capture_default_str();
  sub->add_option("--points", args->points, "Points per forward scene")->capture_default_str();
  add_interval(*sub, "--z-range", args->z_range, "Depth interval in view 1")->capture_default_str();
  add_interval(*sub, "--true-lambda-range", args->true_range, "True distortion interval")->capture_default_str();
  add_interval(*sub, "--fake-lambda-range", args->fake_range, "Fake distortion interval")->capture_default_str();
  sub->add_option("--trials", args->trials, "Spread trials per motion")->capture_default_str();
  sub->add_option("--noise-px", args->noise_px, "Noise sigma in pixels")->capture_default_str();
  sub->add_option("--width-px", args->width_px, "Image width the noise refers to")->capture_default_str();
  sub->add_option("--lambda", args->lambda, "True lambda of the spread scenes")->capture_default_str();
  sub->add_option("--mode", args->mode, "Per-trial estimator")
      ->check(CLI::IsMember({"minimal", "ransac"}))
      ->capture_default_str();
  sub->add_option("--bins", args->bins, "Histogram bins over [-1, 0]")->capture_default_str();
  sub->add_option("--seed", args->seed, "Seed")->capture_default_str();
  sub->add_flag("--skip-ambiguity", args->skip_ambiguity, "Only run the spread experiment");
  sub->add_flag("--skip-spread", args->skip_spread, "Only run the ambiguity check");
  sub->add_option("--json-out", args->json_out, "Write the JSON summary");
  sub->add_option("--hist-out", args->hist_out, "Write the histogram as text");
  sub->callback([args] { run(*args); });
}

}  // namespace rdcalib::cli
