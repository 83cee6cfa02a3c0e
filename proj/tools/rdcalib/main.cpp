#include <cstdio>
#include <exception>
#include <fstream>

#include "commands.hpp"
#include "rdcalib/error.hpp"

namespace rdcalib::cli {

CLI::Option* add_interval(CLI::App& app, const std::string& name, std::vector<double>& target,
                          const std::string& help) {
  return app.add_option(name, target, help)->expected(2)->delimiter(',')->type_name("LO,HI");
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Geometric:
      return "geometric";
    case Provenance::Learned:
      return "learned";
    case Provenance::GroundTruth:
      return "ground_truth";
  }
  return "unknown";
}

nlohmann::ordered_json estimate_json(const CalibrationEstimate& est) {
  nlohmann::ordered_json j;
  j["lambda"] = est.lambda;
  j["f"] = est.f;
  j["cx"] = est.cx;
  j["cy"] = est.cy;
  j["provenance"] = provenance_name(est.provenance);
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace rdcalib::cli

int main(int argc, char** argv) {
  CLI::App app{"Two-view radial distortion self-calibration toolkit"};
  app.require_subcommand(1);
  rdcalib::cli::add_calibrate(app);
  rdcalib::cli::add_undistort(app);
  rdcalib::cli::add_eval(app);
  rdcalib::cli::add_degeneracy(app);
  rdcalib::cli::add_datagen(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const rdcalib::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
