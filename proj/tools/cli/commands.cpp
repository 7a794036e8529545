#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "wulff/blocks.hpp"
#include "wulff/errors.hpp"
#include "wulff/experiments.hpp"
#include "wulff/snapshot.hpp"

namespace wulff::cli {

namespace {

using Runner = void (*)(ExperimentConfig&, ReportRecord&);

RngStream stream_for(const ExperimentConfig& c) { return RngStream(*c.seed, fnv1a64(c.command)); }

BoundaryCondition fk_boundary(const ExperimentConfig& c) {
  if (*c.bc == "free") return BoundaryCondition::free();
  if (*c.bc == "wired") return BoundaryCondition::wired();
  throw ConfigError("this command takes bc wired or free");
}

SpinBoundary spin_boundary(const ExperimentConfig& c) {
  if (*c.bc == "plus") return SpinBoundary::plus;
  if (*c.bc == "free") return SpinBoundary::free;
  throw ConfigError("this command takes bc plus or free");
}

AreaConvention convention(const std::string& name) { return name == "full" ? AreaConvention::full : AreaConvention::half; }

template <typename T>
void fill(std::optional<T>& field, T value) {
  if (!field) field = value;
}

void run_enumerate(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 3);
  const Lattice lattice(*c.n);
  if (c.p) {
    fill(c.bc, std::string("wired"));
    const FkTable table = enumerate_fk(lattice, *c.p, fk_boundary(c));
    const auto block_of = table.bc.block_of_site(lattice);
    std::map<std::pair<int, int>, double> law;
    for (std::uint64_t mask = 0; mask < table.prob.size(); ++mask) {
      const EdgeConfig omega = table.config(mask);
      law[{omega.open_count(), count_clusters(lattice, omega.open, block_of)}] += table.prob[mask];
    }
    Table out{"law", {"open_edges", "clusters", "probability"}, {}};
    for (const auto& [key, prob] : law) out.rows.push_back({double(key.first), double(key.second), prob});
    r.tables.push_back(std::move(out));
    r.metrics.push_back({"states", double(table.prob.size()), "1", {}});
    return;
  }
  fill(c.beta, 0.4);
  fill(c.bc, std::string("plus"));
  const IsingTable table = enumerate_ising(lattice, *c.beta, spin_boundary(c));
  std::map<long long, double> law;
  double magnetization = 0.0;
  for (std::uint64_t mask = 0; mask < table.prob.size(); ++mask) {
    const long long m = table.config(mask).total();
    law[m] += table.prob[mask];
    magnetization += table.prob[mask] * double(m) / lattice.site_count();
  }
  Table out{"law", {"magnetization", "probability"}, {}};
  for (const auto& [m, prob] : law) out.rows.push_back({double(m), prob});
  r.tables.push_back(std::move(out));
  r.metrics.push_back({"states", double(table.prob.size()), "1", {}});
  r.metrics.push_back({"mean_magnetization", magnetization, "1/site", {}});
}

void run_validate_coupling(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 3);
  fill(c.beta, 0.4);
  fill(c.bc, std::string("plus"));
  const CouplingResult result = validate_coupling(Lattice(*c.n), *c.beta, spin_boundary(c));
  r.metrics.push_back({"spin_total_variation", result.spin_tv, "1", {}});
  r.metrics.push_back({"edge_total_variation", result.edge_tv, "1", {}});
  r.metrics.push_back({"joint_states", double(result.joint_states), "1", {}});
}

void run_duality_check(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 3);
  fill(c.p, 0.55);
  const DualityResult result = duality_check(Lattice(*c.n), *c.p);
  r.metrics.push_back({"p_dual", result.p_dual, "1", {}});
  r.metrics.push_back({"primal_wired", result.primal_wired, "probability", {}});
  r.metrics.push_back({"dual_free", result.dual_free, "probability", {}});
  r.metrics.push_back({"abs_difference", std::abs(result.primal_wired - result.dual_free), "probability", {}});
  r.metrics.push_back({"critical_fixed_point_error", std::abs(dual_p(critical().p_c) - critical().p_c), "1", {}});
}

void run_magnetization(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 64);
  fill(c.beta, 0.5);
  fill(c.sweeps, 10000);
  fill(c.bc, std::string("plus"));
  if (*c.bc != "plus") throw ConfigError("magnetization runs under plus boundary conditions");
  const MagnetizationStudy study = magnetization_study(*c.n, *c.beta, *c.sweeps, 200, stream_for(c));
  r.metrics.push_back({"magnetization", study.magnetization.mean, "1/site", study.magnetization.std_error});
  r.metrics.push_back({"onsager", study.onsager, "1/site", {}});
  r.metrics.push_back({"abs_difference", std::abs(study.magnetization.mean - study.onsager), "1/site", {}});
}

void run_tension(ExperimentConfig& c, ReportRecord& r) {
  fill(c.beta, 0.5);
  fill(c.n, 64);
  fill(c.samples, 4000);
  TensionParams params;
  params.beta = *c.beta;
  params.n = *c.n;
  params.samples = *c.samples;
  const TensionStudy study = tension_study(params, stream_for(c));
  Table profile{"profile", {"k", "two_point", "std_error"}, {}};
  for (std::size_t k = 0; k < study.profile.size(); ++k) {
    profile.rows.push_back({double(k), study.profile[k].mean, study.profile[k].std_error});
  }
  r.tables.push_back(std::move(profile));
  r.metrics.push_back({"beta_hat", study.beta_hat, "1", {}});
  r.metrics.push_back({"slope", study.fit.slope, "1/site", {}});
  r.metrics.push_back({"slope_plain", study.plain_fit.slope, "1/site", {}});
  r.metrics.push_back({"exact_tension", study.exact, "1/site", {}});
  r.metrics.push_back({"relative_error", std::abs(study.fit.slope / study.exact - 1.0), "1", {}});
  r.metrics.push_back({"critical_slope", study.critical_slope, "1/site", {}});
}

void run_block_stats(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 96);
  fill(c.p, 0.7);
  fill(c.bc, std::string("wired"));
  fill(c.k, 8);
  fill(c.m, *c.k);
  fill(c.delta, 0.1);
  fill(c.sweeps, 200);
  fill(c.samples, 400);
  const Lattice lattice(*c.n);
  const RngStream rng = stream_for(c);
  const EdgeConfig omega = sample_fk(*c.n, *c.p, fk_boundary(c), *c.sweeps, rng.split(0));
  const BlockEventParams regular{BlockEvent::regular, *c.m, *c.delta, 1.0};
  const BlockField field = block_field(lattice, omega, nullptr, *c.k, std::span(&regular, 1), *c.threads);
  const auto components = bad_component_stats(field);
  Table table{"bad_components", {"size", "diameter"}, {}};
  for (const auto& comp : components) table.rows.push_back({double(comp.size), double(comp.diameter)});
  r.tables.push_back(std::move(table));
  r.metrics.push_back({"blocks", double(field.good.size()), "1", {}});
  r.metrics.push_back({"bad_fraction", field.bad_fraction(), "1", {}});
  r.metrics.push_back({"bad_components", double(components.size()), "1", {}});
  r.metrics.push_back({"largest_bad_component", components.empty() ? 0.0 : double(components.front().size), "blocks", {}});
  // Rare-event estimate of the crossing failure on a free box of side K.
  const Lattice block(*c.k);
  CutLadderParams ladder;
  ladder.n = *c.k;
  ladder.p = *c.p;
  ladder.bc = BoundaryCondition::free();
  ladder.biases = linear_biases(8, 2.0);
  ladder.sweeps = *c.samples;
  ladder.thermalize = 100;
  ladder.replicas = 2;
  const CutLadderResult result = cut_zero_log_probability(ladder, box_crossing_statistic(block, block.bounds()), rng.split(1));
  r.metrics.push_back({"log_prob_no_crossing", result.log_probability, "nats", result.std_error});
}

void run_mixing(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 48);
  fill(c.p, 0.7);
  fill(c.k, 8);
  fill(c.samples, 4000);
  const int n = *c.n, k = *c.k;
  if (3 * k > n) throw ConfigError("mixing needs 3K <= n");
  MixingParams params;
  params.n = n;
  params.p = *c.p;
  params.gamma = {n / 2 - 3 * k / 2, n / 2 - k / 2, k, k};
  params.delta = {n / 2 + k / 2, n / 2 - k / 2, k, k};
  params.samples = *c.samples;
  const Lattice lattice(n);
  auto crossing = [&lattice](Box box) {
    return [&lattice, box](const EdgeConfig& omega) {
      return evaluate_block_event(lattice, omega, box, {BlockEvent::crossing});
    };
  };
  const Estimate estimate = estimate_mixing(params, crossing(params.gamma), crossing(params.delta), stream_for(c));
  r.metrics.push_back({"relative_covariance", estimate.mean, "1", estimate.std_error});
  r.metrics.push_back({"gap", double(params.delta.x0 - params.gamma.x0 - k), "sites", {}});
}

void run_interface_demo(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 48);
  fill(c.samples, 200);
  fill(c.trace, false);
  InterfaceStressParams params;
  params.n = *c.n;
  params.instances = *c.samples;
  const InterfaceStress stress = interface_stress(params, stream_for(c));
  r.metrics.push_back({"instances", double(stress.instances), "1", {}});
  r.metrics.push_back({"tried", double(stress.tried), "1", {}});
  r.metrics.push_back({"with_crossing", double(stress.with_crossing), "1", {}});
  r.metrics.push_back({"max_pieces", double(stress.max_count), "1", {}});
  r.metrics.push_back({"failures", double(stress.failures()), "1", {}});
  r.metrics.push_back({"oracle_checked", double(stress.oracle_checked), "1", {}});
  r.metrics.push_back({"oracle_mismatches", double(stress.oracle_mismatches), "1", {}});
  if (*c.trace) r.trace = stress.first_trace;
}

void run_droplet(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 64);
  fill(c.beta, critical().beta_c + 0.03);
  fill(c.delta, 0.3);
  fill(c.sweeps, 4000);
  fill(c.svg, false);
  DropletStudyParams params;
  params.n = *c.n;
  params.beta = *c.beta;
  params.delta = *c.delta;
  params.sweeps = *c.sweeps;
  params.chains = 4;
  params.threads = *c.threads;
  const DropletStudy study = droplet_study(params, stream_for(c));
  Table table{"droplets",
              {"sample_id", "area", "perimeter_raw", "perimeter_poly", "circularity", "center_u", "center_v", "weight"},
              {}};
  std::size_t heaviest = 0;
  for (std::size_t i = 0; i < study.droplets.size(); ++i) {
    const auto& d = study.droplets[i];
    table.rows.push_back({double(i), d.shape.area, d.shape.perimeter_raw, d.shape.perimeter_poly,
                          d.shape.circularity.value_or(0.0), d.shape.center.u, d.shape.center.v, d.weight});
    if (d.weight > study.droplets[heaviest].weight) heaviest = i;
  }
  r.tables.push_back(std::move(table));
  r.metrics.push_back({"field", study.conditioned.field, "1", {}});
  r.metrics.push_back({"effective_samples", study.conditioned.effective_samples, "samples", {}});
  r.metrics.push_back({"mean_circularity", study.mean_circularity, "1", {}});
  r.metrics.push_back({"weak_distance_full", study.distance_full, "1", {}});
  r.metrics.push_back({"weak_distance_half", study.distance_half, "1", {}});
  if (c.area_convention) {
    const double chosen = convention(*c.area_convention) == AreaConvention::full ? study.distance_full : study.distance_half;
    r.metrics.push_back({"weak_distance", chosen, "1", {}});
  }
  if (*c.svg && !study.droplets.empty()) {
    const auto& shape = study.droplets[heaviest].shape;
    r.svg = spin_svg(study.conditioned.samples[heaviest], contour_segments(shape.region));
  }
}

void run_ldp_rate(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 64);
  fill(c.beta, critical().beta_c + 0.05);
  fill(c.delta, 0.3);
  fill(c.sweeps, 2000);
  const int n = *c.n;
  const std::vector<int> sizes{n / 2, 3 * n / 4, n};
  LevelParams level;
  level.beta = *c.beta;
  level.delta = *c.delta;
  level.sweeps_per_level = *c.sweeps;
  level.threads = *c.threads;
  const RateEstimate rates = ldp_rate(sizes, level, 4.0, stream_for(c));
  Table table{"rates", {"n", "beta", "delta", "log_prob", "stderr", "rate", "J_full", "J_half"}, {}};
  for (const auto& point : rates.points) {
    table.rows.push_back({double(point.n), point.beta, rates.delta, point.estimate.log_probability,
                          point.estimate.std_error, point.rate, rates.j_full, rates.j_half});
  }
  r.tables.push_back(std::move(table));
  const auto& last = rates.points.back();
  r.metrics.push_back({"rate", last.rate, "1", last.rate_error});
  r.metrics.push_back({"J_full", rates.j_full, "1", {}});
  r.metrics.push_back({"J_half", rates.j_half, "1", {}});
}

void run_contiguity(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 96);
  fill(c.beta, critical().beta_c + 0.05);
  fill(c.k, 2);
  fill(c.samples, 100);
  Table table{"distances", {"n", "K", "distance", "std_error", "large_clusters", "bad_blocks", "minus_area"}, {}};
  const RngStream rng = stream_for(c);
  for (int n : {*c.n / 2, *c.n}) {
    ContiguityParams params;
    params.n = n;
    params.beta = *c.beta;
    params.k = *c.k;
    params.samples = *c.samples;
    const ContiguityPoint point = contiguity_study(params, rng.split(static_cast<std::uint64_t>(n)));
    table.rows.push_back({double(n), double(point.k), point.distance.mean, point.distance.std_error,
                          point.large_clusters, point.bad_blocks, point.minus_area});
    r.metrics.push_back({"distance_n" + std::to_string(n), point.distance.mean, "1", point.distance.std_error});
  }
  r.tables.push_back(std::move(table));
}

void run_wall_rate(ExperimentConfig& c, ReportRecord& r) {
  fill(c.n, 32);
  fill(c.p, 0.66);
  fill(c.sweeps, 400);
  WallParams params;
  params.n = *c.n;
  params.p = *c.p;
  params.sweeps = *c.sweeps;
  params.windows = std::max(8, *c.n / 5);
  const WallRate wall = wall_rate(params, stream_for(c));
  r.metrics.push_back({"log_prob", wall.ladder.log_probability, "nats", wall.ladder.std_error});
  r.metrics.push_back({"per_length", wall.per_length, "1/site", wall.ladder.std_error / wall.n});
  r.metrics.push_back({"rate", wall.rate, "1", {}});
  r.metrics.push_back({"predicted_rate", wall.predicted, "1", {}});
  r.metrics.push_back({"ratio", wall.ratio, "1", {}});
  r.metrics.push_back({"box", double(wall.box), "sites", {}});
  r.metrics.push_back({"min_overlap", wall.ladder.min_overlap, "1", {}});
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"enumerate", run_enumerate},         {"validate-coupling", run_validate_coupling},
      {"duality-check", run_duality_check}, {"magnetization", run_magnetization},
      {"tension", run_tension},             {"block-stats", run_block_stats},
      {"mixing", run_mixing},               {"interface-demo", run_interface_demo},
      {"droplet", run_droplet},             {"ldp-rate", run_ldp_rate},
      {"contiguity", run_contiguity},       {"wall-rate", run_wall_rate},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, runner] : runners()) out.push_back(name);
    return out;
  }();
  return names;
}

ReportRecord run_experiment(const ExperimentConfig& config) {
  const auto it = runners().find(config.command);
  if (it == runners().end()) throw ConfigError("unknown subcommand '" + config.command + "'");
  validate(config);
  ExperimentConfig c = config;
  fill(c.seed, std::uint64_t{1});
  fill(c.threads, default_threads());
  fill(c.out, std::string("wulff-out"));
  ReportRecord record;
  record.experiment = c.command;
  const auto start = std::chrono::steady_clock::now();
  it->second(c, record);
  record.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  record.config = c;
  return record;
}

}  // namespace wulff::cli
