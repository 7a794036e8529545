#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "wulff/errors.hpp"

namespace wulff::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

// from_chars for double is missing from older standard libraries.
double parse_double(std::string_view key, std::string_view value) {
  const std::string text(value);
  char* end = nullptr;
  const double out = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" + text + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad value for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::string format_double(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string, std::less<>> seen;
  int line_number = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_number) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.emplace(key).second) throw ConfigError("config key repeated: " + std::string(key));
    if (key == "command") c.command = value;
    else if (key == "n") c.n = parse_number<int>(key, value);
    else if (key == "beta") c.beta = parse_double(key, value);
    else if (key == "p") c.p = parse_double(key, value);
    else if (key == "bc") c.bc = std::string(value);
    else if (key == "delta") c.delta = parse_double(key, value);
    else if (key == "K") c.k = parse_number<int>(key, value);
    else if (key == "M") c.m = parse_number<int>(key, value);
    else if (key == "ell") c.ell = parse_double(key, value);
    else if (key == "sweeps") c.sweeps = parse_number<int>(key, value);
    else if (key == "samples") c.samples = parse_number<int>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads") c.threads = parse_number<int>(key, value);
    else if (key == "grid") c.grid = parse_number<int>(key, value);
    else if (key == "area-convention") c.area_convention = std::string(value);
    else if (key == "out") c.out = std::string(value);
    else if (key == "svg") c.svg = parse_bool(key, value);
    else if (key == "trace") c.trace = parse_bool(key, value);
    else throw ConfigError("unknown config key: " + std::string(key));
  }
  return c;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  if (!c.command.empty()) put("command", c.command);
  if (c.n) put("n", std::to_string(*c.n));
  if (c.beta) put("beta", format_double(*c.beta));
  if (c.p) put("p", format_double(*c.p));
  if (c.bc) put("bc", *c.bc);
  if (c.delta) put("delta", format_double(*c.delta));
  if (c.k) put("K", std::to_string(*c.k));
  if (c.m) put("M", std::to_string(*c.m));
  if (c.ell) put("ell", format_double(*c.ell));
  if (c.sweeps) put("sweeps", std::to_string(*c.sweeps));
  if (c.samples) put("samples", std::to_string(*c.samples));
  if (c.seed) put("seed", std::to_string(*c.seed));
  if (c.threads) put("threads", std::to_string(*c.threads));
  if (c.grid) put("grid", std::to_string(*c.grid));
  if (c.area_convention) put("area-convention", *c.area_convention);
  if (c.out) put("out", *c.out);
  if (c.svg) put("svg", *c.svg ? "true" : "false");
  if (c.trace) put("trace", *c.trace ? "true" : "false");
  return out.str();
}

ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& flags) {
  auto take = [](auto& into, const auto& from) {
    if (from) into = from;
  };
  if (!flags.command.empty()) base.command = flags.command;
  take(base.n, flags.n);
  take(base.beta, flags.beta);
  take(base.p, flags.p);
  take(base.bc, flags.bc);
  take(base.delta, flags.delta);
  take(base.k, flags.k);
  take(base.m, flags.m);
  take(base.ell, flags.ell);
  take(base.sweeps, flags.sweeps);
  take(base.samples, flags.samples);
  take(base.seed, flags.seed);
  take(base.threads, flags.threads);
  take(base.grid, flags.grid);
  take(base.area_convention, flags.area_convention);
  take(base.out, flags.out);
  take(base.svg, flags.svg);
  take(base.trace, flags.trace);
  return base;
}

int default_threads() {
  const char* env = std::getenv("WULFF_THREADS");
  if (env == nullptr) return 1;
  const std::string_view text(env);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && end == text.data() + text.size() && value > 0 ? value : 1;
}

void validate(const ExperimentConfig& c) {
  auto positive = [](const auto& v, const char* name) {
    if (v && *v <= 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(c.n, "n");
  positive(c.k, "K");
  positive(c.m, "M");
  positive(c.sweeps, "sweeps");
  positive(c.samples, "samples");
  positive(c.threads, "threads");
  positive(c.grid, "grid");
  positive(c.beta, "beta");
  positive(c.ell, "ell");
  if (c.p && !(*c.p > 0.0 && *c.p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  if (c.delta && !(*c.delta > 0.0 && *c.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (c.bc && *c.bc != "plus" && *c.bc != "wired" && *c.bc != "free") {
    throw ConfigError("bc must be plus, wired or free");
  }
  if (c.area_convention && *c.area_convention != "full" && *c.area_convention != "half") {
    throw ConfigError("area-convention must be full or half");
  }
  if (c.beta && c.p) throw ConfigError("give either beta or p, not both");
}

}  // namespace wulff::cli
