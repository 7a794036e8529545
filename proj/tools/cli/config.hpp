#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wulff::cli {

// Inputs of one run. Unset numeric fields fall back to per-command defaults, so a
// config file only needs the keys it changes.
struct ExperimentConfig {
  std::string command;
  std::optional<int> n;
  std::optional<double> beta;
  std::optional<double> p;
  std::optional<std::string> bc;  // plus | wired | free
  std::optional<double> delta;
  std::optional<int> k;
  std::optional<int> m;
  std::optional<double> ell;
  std::optional<int> sweeps;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> grid;
  std::optional<std::string> area_convention;  // full | half
  std::optional<std::string> out;
  std::optional<bool> svg;
  std::optional<bool> trace;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Flat "key = value" lines; '#' starts a comment, blank lines are ignored. Keys
// match the long flags (area-convention, K, M, ...) plus "command". Throws
// ConfigError on unknown keys, repeated keys and malformed values.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig read_config_file(const std::string& path);
// Set fields only, in a fixed order, doubles with 17 significant digits, so
// parse_config_text(to_config_text(c)) == c.
std::string to_config_text(const ExperimentConfig& config);

// Fields set in `flags` replace those of `base`.
ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& flags);

// WULFF_THREADS when set to a positive integer, else 1.
int default_threads();

// Checks value ranges and enumerations; throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace wulff::cli
