#include <benchmark/benchmark.h>

#include "wulff/blocks.hpp"
#include "wulff/interface.hpp"
#include "wulff/model.hpp"
#include "wulff/rare.hpp"
#include "wulff/sampler.hpp"

using namespace wulff;

namespace {

void swendsen_wang_sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ClusterSampler chain = ClusterSampler::ising(n, 0.5, SpinBoundary::plus, RngStream(1, 0));
  chain.run(20);
  for (auto _ : state) {
    chain.sweep();
    benchmark::DoNotOptimize(chain.magnetization());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(swendsen_wang_sweep)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void cluster_labelling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Lattice lattice(n);
  const EdgeConfig omega = sample_fk(n, 0.6, BoundaryCondition::wired(), 20, RngStream(2, 0));
  for (auto _ : state) benchmark::DoNotOptimize(label_clusters(lattice, omega).count_with_bc);
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(cluster_labelling)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void crossing_cut_shortest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Lattice lattice(n);
  const EdgeConfig omega = sample_fk(n, 0.7, BoundaryCondition::free(), 20, RngStream(3, 0));
  auto graphs = crossing_cut_graphs(lattice, lattice.bounds());
  for (auto _ : state) {
    const int lr = graphs[0].shortest(omega.open);
    benchmark::DoNotOptimize(graphs[1].shortest(omega.open, lr));
  }
}
BENCHMARK(crossing_cut_shortest)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void regular_block_field(benchmark::State& state) {
  const int n = 128;
  const Lattice lattice(n);
  const EdgeConfig omega = sample_fk(n, 0.7, BoundaryCondition::wired(), 20, RngStream(4, 0));
  const BlockEventParams regular{BlockEvent::regular, 8, 0.1, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(block_field(lattice, omega, nullptr, 8, std::span(&regular, 1)).bad_fraction());
  }
}
BENCHMARK(regular_block_field)->Unit(benchmark::kMillisecond);

void wall_corridor_cut(benchmark::State& state) {
  const int n = 64;
  const Lattice lattice(n);
  const EdgeConfig omega = sample_fk(n, 0.66, BoundaryCondition::wired(), 20, RngStream(5, 0));
  CutGraph graph = wall_cut_graph(lattice, {11, 63}, {117, 63}, 7.0);
  for (auto _ : state) benchmark::DoNotOptimize(graph.shortest(omega.open));
}
BENCHMARK(wall_corridor_cut)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
