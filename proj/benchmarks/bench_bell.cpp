#include <benchmark/benchmark.h>

#include "g2lab/bell.hpp"

using namespace g2lab;

namespace {

void BM_OperatorNorm(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  RandomStream rng(1, 0, 0);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    m(i, i) = rng.normal(0, 1);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      m(i, j) = Complex(rng.normal(0, 1), rng.normal(0, 1));
      m(j, i) = std::conj(m(i, j));
    }
  }
  const HermitianOperator op(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(operator_norm(op));
  }
}
BENCHMARK(BM_OperatorNorm)->Arg(4)->Arg(16)->Arg(64);

void BM_LandauResidual(benchmark::State& state) {
  RandomStream rng(2, 0, 0);
  const auto scenario = random_local_scenario(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(landau_residual(scenario));
  }
}
BENCHMARK(BM_LandauResidual);

void BM_AnalyzeScenario(benchmark::State& state) {
  RandomStream rng(3, 0, 0);
  const auto scenario = random_local_scenario(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(scenario));
  }
}
BENCHMARK(BM_AnalyzeScenario);

void BM_RandomScenarioSweep(benchmark::State& state) {
  // The acceptance sweeps hinge on this compound rate.
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(4, streams::scenario_sweep, i++);
    benchmark::DoNotOptimize(landau_residual(random_local_scenario(rng)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(i));
}
BENCHMARK(BM_RandomScenarioSweep);

void BM_LhvChsh(benchmark::State& state) {
  RandomStream rng(5, 0, 0);
  const auto model = random_lhv_model(static_cast<std::size_t>(state.range(0)),
                                      rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lhv_chsh(model));
  }
}
BENCHMARK(BM_LhvChsh)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
