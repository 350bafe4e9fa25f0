#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "fedstrat/aggregation.hpp"
#include "fedstrat/bandit.hpp"
#include "fedstrat/diagnostics.hpp"
#include "fedstrat/model.hpp"
#include "fedstrat/simulation.hpp"

using namespace fedstrat;

namespace {

std::vector<UpdateVector> random_updates(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<UpdateVector> us(n);
  for (auto& u : us) {
    u.delta.resize(d);
    for (auto& x : u.delta) x = g(rng);
  }
  return us;
}

void BM_FedAvg(benchmark::State& st) {
  const auto us = random_updates(st.range(0), st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(fed_avg(us));
}

void BM_Median(benchmark::State& st) {
  const auto us = random_updates(st.range(0), st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(coordinate_wise_median(us));
}

void BM_Krum(benchmark::State& st) {
  const auto us = random_updates(st.range(0), st.range(1));
  const KrumConfig cfg{static_cast<std::size_t>(st.range(0)) / 4};
  for (auto _ : st) benchmark::DoNotOptimize(krum(us, cfg));
}

void BM_ComputeState(benchmark::State& st) {
  const auto us = random_updates(st.range(0), st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(compute_state(us));
}

void BM_SelectArm(benchmark::State& st) {
  std::vector<ArmState> arms(3, ArmState(3));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  for (int t = 0; t < 100; ++t) arms[t % 3].update(std::vector<double>{u(rng), u(rng), u(rng)}, u(rng));
  const std::vector<double> x{0.3, 0.6, 0.1};
  std::size_t round = 0;
  for (auto _ : st) benchmark::DoNotOptimize(select_arm(arms, x, {}, round++));
}

void BM_LocalTrain(benchmark::State& st) {
  const auto ds = generate_synthetic(10, 20, 50, 3.0, 1);
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto m = init_model(20, 10, static_cast<int>(st.range(0)), 3);
  const TrainConfig cfg{0.05, 0.9, 1, 32};
  for (auto _ : st) benchmark::DoNotOptimize(local_train(m, {&ds, idx}, cfg, 4));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(ds.size()));
}

void BM_Round(benchmark::State& st) {
  ScenarioConfig c;
  c.num_clients = 20;
  c.num_malicious = 5;
  c.rounds = 1;
  c.data = {10, 20, 500, 3.0, 0.1, 0.2};
  c.train.learning_rate = 0.05;
  Simulation sim(c);
  for (auto _ : st) benchmark::DoNotOptimize(sim.run_round());
}

}  // namespace

BENCHMARK(BM_FedAvg)->Args({20, 1000})->Args({100, 1000});
BENCHMARK(BM_Median)->Args({20, 1000})->Args({100, 1000});
BENCHMARK(BM_Krum)->Args({20, 1000})->Args({100, 1000});
BENCHMARK(BM_ComputeState)->Args({20, 1000})->Args({100, 1000});
BENCHMARK(BM_SelectArm);
BENCHMARK(BM_LocalTrain)->Arg(32)->Arg(128);
BENCHMARK(BM_Round)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
