#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace wulff::cli {

const std::vector<std::string>& command_names();

// Fills in per-command defaults, runs the experiment and returns its record.
// Throws ConfigError for unknown commands or bad parameters; library errors pass through.
ReportRecord run_experiment(const ExperimentConfig& config);

}  // namespace wulff::cli
