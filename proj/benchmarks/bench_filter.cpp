#include <benchmark/benchmark.h>

#include <vector>

#include "sdm/belief.hpp"
#include "sdm/filter.hpp"
#include "sdm/metrics.hpp"
#include "sdm/rng.hpp"
#include "sdm/simulation.hpp"

namespace {

void BM_PredictRaw(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdm::predict_raw(weights, 0.05));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PredictRaw)->Arg(30)->Arg(120)->Arg(480);

void BM_FilterStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  sdm::Rng rng(1);
  std::vector<sdm::DistanceVector> distances(256);
  for (auto& d : distances) {
    d.resize(n);
    for (double& v : d) v = 2.0 * rng.uniform01();
  }
  sdm::LagFilter filter({.n_states = n});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter.step(distances[i++ & 255]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FilterStep)->Arg(30)->Arg(120);

void BM_MatrixFilterStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  sdm::Rng rng(2);
  std::vector<sdm::DistanceMatrix> distances(256);
  for (auto& d : distances) {
    d.col1.resize(n);
    d.col2.resize(n);
    for (double& v : d.col1) v = 2.0 * rng.uniform01();
    for (double& v : d.col2) v = 2.0 * rng.uniform01();
  }
  sdm::MatrixLagFilter filter({.n_states = n});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter.step(distances[i++ & 255]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MatrixFilterStep)->Arg(30);

void BM_Simulate(benchmark::State& state) {
  sdm::SimConfig config;
  config.family = sdm::Family::kF3;
  config.sigma_u = 0.25;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(sdm::make_pair(config));
  }
}
BENCHMARK(BM_Simulate);

void BM_RunTrial(benchmark::State& state) {
  sdm::SimConfig config;
  config.family = sdm::Family::kF5;
  config.sigma_u = 0.25;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(sdm::run_trial(config, sdm::RunOptions{}));
  }
}
BENCHMARK(BM_RunTrial);

}  // namespace

BENCHMARK_MAIN();
