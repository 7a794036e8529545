#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/report.hpp"
#include "doctest.h"
#include "wulff/errors.hpp"

using namespace wulff;
using namespace wulff::cli;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("config text round trip") {
  ExperimentConfig c;
  c.command = "droplet";
  c.n = 64;
  c.beta = 0.1 + 0.2;  // not exactly representable in short decimal form
  c.p = 2.0 / 3.0;
  c.bc = "wired";
  c.delta = 0.3;
  c.k = 4;
  c.m = 6;
  c.ell = 1.5;
  c.sweeps = 1000;
  c.samples = 50;
  c.seed = 18446744073709551615ULL;
  c.threads = 4;
  c.grid = 128;
  c.area_convention = "half";
  c.out = "results dir";
  c.svg = true;
  c.trace = false;
  CHECK(parse_config_text(to_config_text(c)) == c);
  ExperimentConfig sparse;
  sparse.command = "tension";
  sparse.beta = 0.5;
  CHECK(parse_config_text(to_config_text(sparse)) == sparse);
}

TEST_CASE("config parsing") {
  const auto c = parse_config_text("# comment\ncommand = enumerate\n\nn = 3  # trailing\nK = 2\narea-convention = full\n");
  CHECK(c.command == "enumerate");
  CHECK(c.n == 3);
  CHECK(c.k == 2);
  CHECK(c.area_convention == "full");
  CHECK_THROWS_AS(parse_config_text("n = 3\nn = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = three\n"), ConfigError);
  ExperimentConfig flags;
  flags.n = 5;
  const auto merged = merge(c, flags);
  CHECK(merged.n == 5);
  CHECK(merged.k == 2);
  ExperimentConfig bad;
  bad.command = "enumerate";
  bad.p = 1.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("thread default from the environment") {
  setenv("WULFF_THREADS", "3", 1);
  CHECK(default_threads() == 3);
  setenv("WULFF_THREADS", "zero", 1);
  CHECK(default_threads() == 1);
  unsetenv("WULFF_THREADS");
  CHECK(default_threads() == 1);
}

TEST_CASE("CSV output") {
  const Table empty{"t", {"a", "b"}, {}};
  CHECK(to_csv(empty) == "a,b\n");
  CHECK(metrics_csv({}) == "name,value,unit,std_error\n");
  const Table table{"t", {"x", "y"}, {{1.0, 1.0 / 3.0}, {2.5, -4e-20}}};
  CHECK(to_csv(table) == to_csv(table));
  CHECK(to_csv(table) == "x,y\n1,0.333333333333\n2.5,-4e-20\n");
}

TEST_CASE("SVG snapshot has the boundary overlay") {
  const Lattice lattice(4);
  auto sigma = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
  sigma.values[5] = -1;
  const std::string svg = spin_svg(sigma, {{{0.0, 0.0}, {0.25, 0.0}}});
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("unknown commands and oracle limits") {
  ExperimentConfig c;
  c.command = "nonsense";
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.command = "enumerate";
  c.n = 7;
  CHECK_THROWS_AS(run_experiment(c), OracleSizeError);
  CHECK(command_names().size() == 12);
}

TEST_CASE("runs are deterministic and emit byte-identical files") {
  const auto root = std::filesystem::temp_directory_path() / "wulff_unit_cli";
  std::filesystem::remove_all(root);
  for (const std::string command : {"enumerate", "validate-coupling", "duality-check"}) {
    ExperimentConfig c;
    c.command = command;
    c.n = 3;
    c.seed = 9;
    const ReportRecord first = run_experiment(c);
    const ReportRecord second = run_experiment(c);
    CHECK(to_json(first) == to_json(second));
    const auto a = emit_report(first, root / (command + "_a"));
    const auto b = emit_report(second, root / (command + "_b"));
    REQUIRE(a.size() == b.size());
    CHECK(a.back().filename() == "manifest.json");
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      CHECK(a[i].filename() == b[i].filename());
      CHECK(slurp(a[i]) == slurp(b[i]));
    }
  }
  std::filesystem::remove_all(root);
}

TEST_CASE("duality-check subcommand") {
  ExperimentConfig c;
  c.command = "duality-check";
  c.n = 3;
  c.p = 0.55;
  const ReportRecord r = run_experiment(c);
  bool found = false;
  for (const Metric& m : r.metrics) {
    if (m.name.find("difference") != std::string::npos) {
      found = true;
      CHECK(m.value < 1e-10);
    }
  }
  CHECK(found);
}

TEST_CASE("results do not depend on the thread count") {
  ExperimentConfig c;
  c.command = "block-stats";
  c.n = 32;
  c.k = 8;
  c.sweeps = 20;
  c.samples = 40;
  c.threads = 1;
  const ReportRecord one = run_experiment(c);
  c.threads = 4;
  const ReportRecord four = run_experiment(c);
  CHECK(to_json(one) == to_json(four));
  for (std::size_t t = 0; t < one.tables.size(); ++t) CHECK(to_csv(one.tables[t]) == to_csv(four.tables[t]));
  CHECK(metrics_csv(one.metrics) == metrics_csv(four.metrics));
}

TEST_CASE("droplet run carries an SVG overlay") {
  ExperimentConfig c;
  c.command = "droplet";
  c.n = 24;
  c.sweeps = 40;
  c.svg = true;
  const ReportRecord r = run_experiment(c);
  REQUIRE(r.svg.has_value());
  CHECK(r.svg->find("<polyline") != std::string::npos);
}
