#include <iostream>
#include <memory>

#include "commands.hpp"
#include "rdcalib/datagen.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib::cli {

namespace {

struct DatagenArgs {
  std::string input;
  std::string output;
  DatagenOptions options;
  std::vector<double> cx{0.45, 0.55};
  std::vector<double> cy{0.45, 0.55};
  std::vector<double> f{0.6, 1.8};
  std::vector<double> lambda{-1.0, 0.0};
};

void run(DatagenArgs& a) {
  a.options.ranges.cx = {a.cx[0], a.cx[1]};
  a.options.ranges.cy = {a.cy[0], a.cy[1]};
  a.options.ranges.f = {a.f[0], a.f[1]};
  a.options.ranges.lambda = {a.lambda[0], a.lambda[1]};
  const auto m = generate_dataset(a.input, a.output, a.options);
  std::cout << m.records.size() << " record(s), " << m.skipped_existing << " already present, " << m.errors.size()
            << " error(s)\n";
  for (const auto& e : m.errors) std::cerr << "error: " << e.source << ": " << e.message << "\n";
}

}  // namespace

void add_datagen(CLI::App& app) {
  auto args = std::make_shared<DatagenArgs>();
  auto* sub = app.add_subcommand("datagen", "Render labeled distorted images from calibrated ones");
  sub->footer(
      "Every input PNG yields --count images named <stem>_<kk>.png with uniformly drawn lambda, f, cx, cy.\n"
      "f and cx are normalized by the output width, cy by the output height. Labels go to\n"
      "manifest.json, per-file failures to errors.json. Existing outputs are kept and re-listed.");
  sub->add_option("--input", args->input, "Directory of calibrated PNG images")
      ->required()
      ->check(CLI::ExistingDirectory);
  sub->add_option("--output", args->output, "Output directory")->required();
  sub->add_option("--count", args->options.ranges.per_image_count, "Images per input")->capture_default_str();
  sub->add_option("--seed", args->options.seed, "Sampling seed")->capture_default_str();
  add_interval(*sub, "--cx-range", args->cx, "Principal point x interval")->capture_default_str();
  add_interval(*sub, "--cy-range", args->cy, "Principal point y interval")->capture_default_str();
  add_interval(*sub, "--f-range", args->f, "Focal length interval")->capture_default_str();
  add_interval(*sub, "--lambda-range", args->lambda, "Distortion interval")->capture_default_str();
  sub->add_option("--width", args->options.out_width, "Output width")->capture_default_str();
  sub->add_option("--height", args->options.out_height, "Output height")->capture_default_str();
  sub->add_option("--source-f", args->options.source_f, "Focal length of the inputs, width-normalized")
      ->capture_default_str();
  sub->add_option("--source-cx", args->options.source_cx, "Principal point x of the inputs")->capture_default_str();
  sub->add_option("--source-cy", args->options.source_cy, "Principal point y of the inputs")->capture_default_str();
  sub->callback([args] { run(*args); });
}

}  // namespace rdcalib::cli
