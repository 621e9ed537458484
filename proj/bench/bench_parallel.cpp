#include <benchmark/benchmark.h>

#include "lpiv/bounds.hpp"
#include "lpiv/dynamics.hpp"
#include "lpiv/monte_carlo.hpp"
#include "lpiv/splitfilters.hpp"

using namespace lpiv;

namespace {

struct DesignFixture {
  MeasurementSeries z;
  SplitFilterBank bank;
  FeatureMap features;

  DesignFixture()
      : z(add_noise(integrate({}, {-8.0, 8.0, 27.0}, 1e-3, 100000, 10), 0.1, 1)),
        bank(build_split_bank(Mode::continuous, 100, 1e-3, 75)),
        features(lorenz_features(1.0)) {}
};

const DesignFixture& design_fixture() {
  static const DesignFixture f;
  return f;
}

const ExperimentContext& experiment() {
  static const ExperimentContext ctx = [] {
    auto cfg = ExperimentConfig::defaults(Mode::continuous);
    cfg.n = 20000;
    cfg.trials = 16;
    return prepare_experiment(cfg);
  }();
  return ctx;
}

}  // namespace

static void BM_AssembleDesign(benchmark::State& state) {
  const auto& f = design_fixture();
  for (auto _ : state) {
    auto d = state.range(0) ? assemble_design(f.z.values, f.bank, f.features, {})
                            : assemble_design_serial(f.z.values, f.bank, f.features, {});
    benchmark::DoNotOptimize(d.X.data());
  }
}
BENCHMARK(BM_AssembleDesign)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_GammaMonteCarlo(benchmark::State& state) {
  const GammaParams p{2.0, 1.0, 10.0, 1.0};
  for (auto _ : state) {
    auto c = state.range(0) ? mc_check_gamma(p, 1000000, 3) : mc_check_gamma_serial(p, 1000000, 3);
    benchmark::DoNotOptimize(c.empirical_Lr);
  }
}
BENCHMARK(BM_GammaMonteCarlo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_MonteCarloTrials(benchmark::State& state) {
  const auto& ctx = experiment();
  for (auto _ : state) {
    auto r = run_monte_carlo(ctx, state.range(0) ? Execution::parallel : Execution::serial);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_MonteCarloTrials)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
