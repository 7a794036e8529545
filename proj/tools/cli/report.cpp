#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "wulff/snapshot.hpp"

namespace wulff::cli {

namespace {

std::string number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", v);
  return buffer;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  out << text;
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
}

std::string hex(std::uint64_t v) {
  char buffer[20];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(v));
  return buffer;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + number(row[i]);
    out += '\n';
  }
  return out;
}

std::string metrics_csv(const std::vector<Metric>& metrics) {
  std::string out = "name,value,unit,std_error\n";
  for (const auto& m : metrics) {
    out += m.name + "," + number(m.value) + "," + m.unit + "," + (m.std_error ? number(*m.std_error) : "") + "\n";
  }
  return out;
}

std::string to_json(const ReportRecord& record) {
  nlohmann::ordered_json j;
  j["experiment"] = record.experiment;
  j["version"] = WULFF_VERSION;
  // Threads and the output directory do not change results, so they stay out of
  // the echo and the JSON is identical across them.
  ExperimentConfig echo = record.config;
  echo.threads.reset();
  echo.out.reset();
  j["inputs"] = to_config_text(echo);
  auto& metrics = j["metrics"] = nlohmann::ordered_json::array();
  for (const auto& m : record.metrics) {
    nlohmann::ordered_json entry;
    entry["name"] = m.name;
    entry["value"] = m.value;
    entry["unit"] = m.unit;
    if (m.std_error) entry["std_error"] = *m.std_error;
    metrics.push_back(std::move(entry));
  }
  if (!record.trace.empty()) j["trace"] = record.trace;
  return j.dump(2) + "\n";
}

std::string spin_svg(const SpinConfig& sigma, const std::vector<Segment>& boundary) {
  constexpr int cell = 8;
  const int n = sigma.side;
  const int size = n * cell;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
  out << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"#f4f1e8\"/>\n";
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (sigma.values[static_cast<std::size_t>(y * n + x)] > 0) continue;
      out << "<rect x=\"" << x * cell << "\" y=\"" << (n - 1 - y) * cell << "\" width=\"" << cell << "\" height=\""
          << cell << "\" fill=\"#2b4c7e\"/>\n";
    }
  }
  // Q = [-1/2, 1/2]^2 with v pointing up.
  auto px = [&](double u) { return number((u + 0.5) * size); };
  auto py = [&](double v) { return number((0.5 - v) * size); };
  for (const auto& s : boundary) {
    out << "<polyline points=\"" << px(s.a.u) << ',' << py(s.a.v) << ' ' << px(s.b.u) << ',' << py(s.b.v)
        << "\" fill=\"none\" stroke=\"#d1495b\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<std::filesystem::path> emit_report(const ReportRecord& record, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(directory / name, text);
    written.push_back(directory / name);
    return fnv1a64(text);
  };
  nlohmann::ordered_json manifest;
  manifest["experiment"] = record.experiment;
  manifest["version"] = WULFF_VERSION;
  manifest["config"] = to_config_text(record.config);
  manifest["wall_clock_seconds"] = record.wall_clock;
  auto& outputs = manifest["outputs"] = nlohmann::ordered_json::array();
  auto note = [&](const std::string& name, std::uint64_t hash) { outputs.push_back({{"file", name}, {"fnv1a64", hex(hash)}}); };
  const std::string stem = record.experiment;
  note(stem + ".json", emit(stem + ".json", to_json(record)));
  note(stem + "_metrics.csv", emit(stem + "_metrics.csv", metrics_csv(record.metrics)));
  for (const auto& table : record.tables) {
    const std::string name = stem + "_" + table.name + ".csv";
    note(name, emit(name, to_csv(table)));
  }
  if (record.svg) note(stem + ".svg", emit(stem + ".svg", *record.svg));
  emit("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace wulff::cli
