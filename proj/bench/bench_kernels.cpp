#include <benchmark/benchmark.h>

#include "ipp/graph.hpp"
#include "ipp/neighbours.hpp"
#include "ipp/parallel.hpp"
#include "ipp/process.hpp"

namespace {

ipp::Configuration poisson_sample(double side, std::uint64_t seed) {
  ipp::Rng rng(seed);
  return ipp::sample_poisson(ipp::Space::torus(2, side), 1.0, rng);
}

void BM_ClosePairs(benchmark::State& state) {
  const auto c = poisson_sample(static_cast<double>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(ipp::close_pairs(c.space, c.points, 1.5));
  state.counters["points"] = static_cast<double>(c.size());
}

void BM_ClosePairsSerial(benchmark::State& state) {
  const auto c = poisson_sample(static_cast<double>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(ipp::close_pairs_serial(c.space, c.points, 1.5));
  state.counters["points"] = static_cast<double>(c.size());
}

double replica_work(std::size_t r) {
  const auto c = poisson_sample(20.0, r + 1);
  const auto g = ipp::distance_graph(c, 1.5);
  return static_cast<double>(ipp::connected_components(g).largest);
}

void BM_MapReplicas(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ipp::map_replicas(n, replica_work));
}

void BM_MapReplicasSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ipp::map_replicas_serial(n, replica_work));
}

}  // namespace

BENCHMARK(BM_ClosePairs)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosePairsSerial)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MapReplicas)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MapReplicasSerial)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
