#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/report.hpp"
#include "wulff/errors.hpp"

namespace {

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, oracle_size = 3, starvation = 4 };

}  // namespace

int main(int argc, char** argv) {
  using wulff::cli::ExperimentConfig;
  CLI::App app{"Near-critical 2D Ising and FK experiments"};
  app.require_subcommand(1);
  ExperimentConfig flags;
  std::string config_path;
  for (const auto& name : wulff::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--n", flags.n, "box side");
    auto* beta = sub->add_option("--beta", flags.beta, "inverse temperature");
    auto* p = sub->add_option("--p", flags.p, "edge probability");
    beta->excludes(p);
    sub->add_option("--bc", flags.bc, "boundary condition")->check(CLI::IsMember({"plus", "wired", "free"}));
    sub->add_option("--delta", flags.delta);
    sub->add_option("--K", flags.k, "block scale");
    sub->add_option("--M", flags.m, "diameter threshold");
    sub->add_option("--ell", flags.ell);
    sub->add_option("--sweeps", flags.sweeps);
    sub->add_option("--samples", flags.samples);
    sub->add_option("--seed", flags.seed);
    sub->add_option("--threads", flags.threads, "worker count (default WULFF_THREADS or 1)");
    sub->add_option("--grid", flags.grid);
    sub->add_option("--area-convention", flags.area_convention)->check(CLI::IsMember({"full", "half"}));
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--config", config_path, "key = value file; flags override it");
    sub->add_flag("--svg", flags.svg, "write an SVG snapshot");
    sub->add_flag("--trace", flags.trace, "record the algorithm trace");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }
  try {
    flags.command = app.get_subcommands().front()->get_name();
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : wulff::cli::read_config_file(config_path);
    if (!config.command.empty() && config.command != flags.command) {
      throw wulff::ConfigError("config file is for '" + config.command + "', not '" + flags.command + "'");
    }
    config = wulff::cli::merge(config, flags);
    const auto record = wulff::cli::run_experiment(config);
    const auto written = wulff::cli::emit_report(record, *record.config.out);
    for (const auto& m : record.metrics) {
      std::printf("%s = %.12g %s", m.name.c_str(), m.value, m.unit.c_str());
      if (m.std_error) std::printf(" +- %.3g", *m.std_error);
      std::printf("\n");
    }
    for (const auto& line : record.trace) std::printf("%s\n", line.c_str());
    std::printf("wrote %zu files to %s in %.2f s\n", written.size(), record.config.out->c_str(), record.wall_clock);
    return ok;
  } catch (const wulff::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return config_error;
  } catch (const wulff::OracleSizeError& e) {
    std::fprintf(stderr, "oracle size error: %s\n", e.what());
    return oracle_size;
  } catch (const wulff::StarvationError& e) {
    std::fprintf(stderr, "sampler starvation: %s (acceptance estimate %.3g)\n", e.what(), e.acceptance_estimate());
    return starvation;
  } catch (const wulff::AlgorithmError& e) {
    std::fprintf(stderr, "algorithm error: %s\n%s\n", e.what(), e.trace().c_str());
    return failure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return failure;
  }
}
