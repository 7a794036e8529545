#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "wulff/measure.hpp"
#include "wulff/model.hpp"

namespace wulff::cli {

struct Metric {
  std::string name;
  double value = 0.0;
  std::string unit;  // "1" for dimensionless quantities
  std::optional<double> std_error;
};

struct Table {
  std::string name;  // file stem suffix
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ReportRecord {
  std::string experiment;
  ExperimentConfig config;  // after defaults were filled in
  std::vector<Metric> metrics;
  std::vector<Table> tables;
  std::optional<std::string> svg;
  std::vector<std::string> trace;
  double wall_clock = 0.0;  // seconds; kept out of the deterministic outputs
};

// Fixed column order, 12 significant digits, "\n" line ends; header only when empty.
std::string to_csv(const Table& table);
std::string metrics_csv(const std::vector<Metric>& metrics);
// Pretty JSON with the config echo and the metrics; no timings.
std::string to_json(const ReportRecord& record);

// Cells coloured by spin, optional region boundary drawn as line segments.
std::string spin_svg(const SpinConfig& sigma, const std::vector<Segment>& boundary);

// Writes <experiment>.json, <experiment>_metrics.csv, one CSV per table, the SVG
// when present, and manifest.json with the config text, the wall clock and the
// FNV-1a hash of every other file. Returns the written paths, manifest last.
std::vector<std::filesystem::path> emit_report(const ReportRecord& record, const std::filesystem::path& directory);

}  // namespace wulff::cli
