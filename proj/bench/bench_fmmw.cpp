#include <benchmark/benchmark.h>

#include <vector>

#include "fmmw/analysis.hpp"
#include "fmmw/montecarlo.hpp"

using namespace fmmw;

namespace {

const std::vector<double>& thresholds() {
  static const std::vector<double> b = [] {
    std::vector<double> out;
    for (double db = -10.0; db <= 30.0; db += 2.0) out.push_back(db_to_linear(db));
    return out;
  }();
  return b;
}

void BM_CoverageCurveSerial(benchmark::State& state) {
  const NetworkConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_coverage_curve_serial(cfg, 10.0, thresholds(), state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoverageCurveSerial)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_CoverageCurveParallel(benchmark::State& state) {
  const NetworkConfig cfg;
  SimOptions opt;
  opt.chunk = 512;
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_coverage_curve(cfg, 10.0, thresholds(), state.range(0), 7, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoverageCurveParallel)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LaplaceTransform(benchmark::State& state) {
  static const InterferenceModel model{NetworkConfig{}};
  double s = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.laplace_transform(Tier::los, Tier::los, s, 12.0, 20.0));
    s = s < 1e3 ? s * 1.37 : 1.0;
  }
}
BENCHMARK(BM_LaplaceTransform)->Unit(benchmark::kMicrosecond);

void BM_CoverageAnalytic(benchmark::State& state) {
  static const CoverageAnalyzer an{NetworkConfig{}};
  for (auto _ : state) benchmark::DoNotOptimize(an.coverage({db_to_linear(10.0), 20.0}));
}
BENCHMARK(BM_CoverageAnalytic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
