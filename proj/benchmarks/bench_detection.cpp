#include <benchmark/benchmark.h>

#include "g2lab/detection.hpp"
#include "g2lab/stats.hpp"

using namespace g2lab;

namespace {

void BM_QuantumDetect(benchmark::State& state) {
  ComplexVector v(2);
  v << 1.0, 1.0;
  const auto psi = normalize(v);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RandomStream rng(1, streams::detection, trial++);
    benchmark::DoNotOptimize(quantum_detect(psi, trial, rng));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(trial));
}
BENCHMARK(BM_QuantumDetect);

void BM_ThermalSemiclassicalTrial(benchmark::State& state) {
  const auto model = ClassicalFieldModel::thermal(1.0, 1.0, true);
  DetectorConfig cfg;
  cfg.model = DetectorModel::semiclassical_poisson;
  cfg.gate_time = 0.1;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RandomStream rng(2, streams::detection, trial);
    const auto sample = model.sample(trial, rng);
    benchmark::DoNotOptimize(
        semiclassical_detect(beamsplit(sample), cfg, rng));
    ++trial;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(trial));
}
BENCHMARK(BM_ThermalSemiclassicalTrial);

void BM_ThresholdPipeline(benchmark::State& state) {
  const auto model = ClassicalFieldModel::anti_correlated(1.0, 0.01);
  DetectorConfig cfg;
  cfg.model = DetectorModel::threshold;
  cfg.threshold = 0.5;
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    ClickAccumulator acc;
    run_experiment(model, cfg, trials, 3,
                   [&](const ClickRecord& r) { acc.add(r); });
    benchmark::DoNotOptimize(acc.stats());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_ThresholdPipeline)->Arg(10'000)->Arg(100'000);

void BM_AccumulateMerge(benchmark::State& state) {
  ClickRecord r;
  r.channel_count = 2;
  r.set(0);
  for (auto _ : state) {
    ClickAccumulator a, b;
    for (int i = 0; i < 1000; ++i) {
      a.add(r);
      b.add(r);
    }
    benchmark::DoNotOptimize(merge(a.stats(), b.stats()));
  }
}
BENCHMARK(BM_AccumulateMerge);

}  // namespace
