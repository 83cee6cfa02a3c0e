#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib::cli {

namespace {

struct EvalArgs {
  std::string predictions;
  std::string ground_truth;
  std::string out_dir;
};

constexpr const char* kParams[] = {"lambda", "f", "cx", "cy"};

void run(const EvalArgs& a) {
  const auto preds = read_predictions(a.predictions, Provenance::Learned);
  std::map<std::string, CalibrationEstimate> gt;
  for (auto& [frame, est] : read_predictions(a.ground_truth, Provenance::GroundTruth)) gt.emplace(frame, est);

  std::ostringstream rows;
  rows << "frame,param,relative_error\n";
  std::vector<double> errs[4];
  int unmatched = 0;
  for (const auto& [frame, est] : preds) {
    const auto it = gt.find(frame);
    if (it == gt.end()) {
      ++unmatched;
      std::fprintf(stderr, "warning: no ground truth for %s\n", frame.c_str());
      continue;
    }
    const auto r = relative_errors(est, it->second);
    const double v[4] = {r.lambda, r.f, r.cx, r.cy};
    for (int k = 0; k < 4; ++k) {
      errs[k].push_back(v[k]);
      rows << frame << ',' << kParams[k] << ',' << format_number(v[k]) << '\n';
    }
  }
  if (errs[0].empty()) throw Error(ErrorCode::MissingInput, "no prediction matches a ground-truth frame");

  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  write_file((dir / "errors.csv").string(), rows.str());

  nlohmann::ordered_json summary;
  summary["frames"] = errs[0].size();
  summary["unmatched"] = unmatched;
  for (int k = 0; k < 4; ++k) {
    std::ostringstream csv;
    csv << "threshold,fraction\n";
    for (const auto& p : cdf(errs[k])) csv << format_number(p.threshold) << ',' << format_number(p.fraction) << '\n';
    write_file((dir / (std::string("cdf_") + kParams[k] + ".csv")).string(), csv.str());
    double sum = 0.0;
    for (double e : errs[k]) sum += e;
    summary["mean_relative_error"][kParams[k]] = sum / static_cast<double>(errs[k].size());
  }
  std::cout << summary.dump(2) << "\n";
}

}  // namespace

void add_eval(CLI::App& app) {
  auto args = std::make_shared<EvalArgs>();
  auto* sub = app.add_subcommand("eval", "Relative errors and their CDFs against ground truth");
  sub->footer(
      "Relative error per parameter is |x - x_gt| / |x_gt|. Ground truth may be a predictions file or a\n"
      "datagen manifest.json (records are matched by frame or image name). Writes errors.csv with\n"
      "frame,param,relative_error rows and cdf_<param>.csv with threshold,fraction rows.");
  sub->add_option("--predictions", args->predictions, "Predictions JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--ground-truth", args->ground_truth, "Ground-truth predictions JSON or manifest.json")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out-dir", args->out_dir, "Output directory for the CSV files")->required();
  sub->callback([args] { run(*args); });
}

}  // namespace rdcalib::cli
