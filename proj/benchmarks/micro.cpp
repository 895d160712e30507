#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "augbp/baselines.hpp"
#include "augbp/instance_io.hpp"
#include "augbp/messages.hpp"
#include "augbp/modularity.hpp"
#include "augbp/tsp_solver.hpp"

using namespace augbp;

namespace {

void BM_Top3Insert(benchmark::State& state) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = value(gen);
  for (auto _ : state) {
    mp::Top3Tracker tracker;
    for (std::size_t i = 0; i < values.size(); ++i) tracker.insert(values[i], static_cast<mp::EdgeId>(i));
    benchmark::DoNotOptimize(mp::min2_excluding(tracker, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Top3Insert)->Arg(64)->Arg(1024);

void BM_TspIteration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = io::gen_instance({io::Family::Euclid2d, n, 1});
  tsp::TspParams params;
  tsp::TspState graph = tsp::build_initial_graph(inst);
  for (auto _ : state) benchmark::DoNotOptimize(tsp::bp_iteration(graph, params));
}
BENCHMARK(BM_TspIteration)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_TspSolve(benchmark::State& state) {
  const auto inst = io::gen_instance({io::Family::Euclid2d, static_cast<std::size_t>(state.range(0)), 1});
  for (auto _ : state) benchmark::DoNotOptimize(tsp::solve(inst).tour.length);
}
BENCHMARK(BM_TspSolve)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_HeldKarp(benchmark::State& state) {
  const auto inst = io::gen_instance({io::Family::RandomMatrix, static_cast<std::size_t>(state.range(0)), 1});
  for (auto _ : state) benchmark::DoNotOptimize(tsp::held_karp_exact(inst).tour.length);
}
BENCHMARK(BM_HeldKarp)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

cluster::WeightedGraph random_graph(std::size_t n, double p) {
  std::mt19937_64 gen(3);
  std::bernoulli_distribution keep(p);
  cluster::WeightedGraph g;
  g.n = n;
  for (cluster::NodeId u = 0; u < n; ++u) {
    for (cluster::NodeId v = u + 1; v < n; ++v) {
      if (keep(gen)) g.edges.push_back({u, v, 1.0});
    }
  }
  return g;
}

void BM_ClusterSweep(benchmark::State& state) {
  const auto weights = cluster::normalize_weights(random_graph(static_cast<std::size_t>(state.range(0)), 0.1));
  cluster::ClusterParams params;
  params.eps_max = 1.0;
  auto graph = cluster::build_cluster_state(weights, cluster::sample_sparse_null(weights, params.alpha, 1));
  for (auto _ : state) benchmark::DoNotOptimize(cluster::bp_sweep(graph, params));
}
BENCHMARK(BM_ClusterSweep)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_ClusterSolve(benchmark::State& state) {
  const auto graph = random_graph(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cluster::solve(graph, {}, cluster::NullKind::Sparse, 1).modularity);
  }
}
BENCHMARK(BM_ClusterSolve)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
