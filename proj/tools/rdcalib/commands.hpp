#pragma once

#include <CLI11.hpp>

#include <string>
#include <vector>

#include <json.hpp>

#include "rdcalib/calibration.hpp"

namespace rdcalib::cli {

// Each subcommand registers its options and a callback on the app.
void add_calibrate(CLI::App& app);
void add_undistort(CLI::App& app);
void add_eval(CLI::App& app);
void add_degeneracy(CLI::App& app);
void add_datagen(CLI::App& app);

// "a,b" option holding a closed interval.
CLI::Option* add_interval(CLI::App& app, const std::string& name, std::vector<double>& target,
                          const std::string& help);

nlohmann::ordered_json estimate_json(const CalibrationEstimate& est);
std::string_view provenance_name(Provenance p);

void write_file(const std::string& path, const std::string& text);

}  // namespace rdcalib::cli
