#include <benchmark/benchmark.h>

#include <sstream>
#include <vector>

#include "bsmsentinel/cusum.hpp"
#include "bsmsentinel/features.hpp"
#include "bsmsentinel/mixture.hpp"
#include "bsmsentinel/pipeline.hpp"
#include "bsmsentinel/trace_io.hpp"

using namespace bsmsentinel;

namespace {

const LabeledTrace& dos_trace() {
  static const LabeledTrace trace = [] {
    AttackSpec dos;
    dos.kind = AttackKind::kDos;
    dos.target_vehicle = 6;
    dos.onset = 100.0;
    dos.duration = 10.0;
    const std::vector<AttackSpec> attacks = {dos};
    return simulate(ScenarioConfig{}, attacks);
  }();
  return trace;
}

void BM_CusumStep(benchmark::State& state) {
  CusumParams p;
  p.mu0 = 10.0;
  p.sigma = 0.1;
  p.k = 0.05;
  p.h = 0.5;
  CusumState s;
  double y = 10.0;
  for (auto _ : state) {
    const auto step = cusum_step(s, p, y);
    s = step.state;
    y = y > 10.2 ? 9.9 : y + 0.01;
    benchmark::DoNotOptimize(step);
  }
}
BENCHMARK(BM_CusumStep);

void BM_EmPosterior(benchmark::State& state) {
  const auto model = em_initial_model(10.0, 0.01);
  double y = 9.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(em_posterior(model, y));
    y = y > 11.0 ? 9.5 : y + 0.001;
  }
}
BENCHMARK(BM_EmPosterior);

void BM_EmFit(benchmark::State& state) {
  std::vector<double> samples;
  for (int i = 0; i < state.range(0); ++i) samples.push_back(i % 2 ? 1.0 + 0.001 * (i % 17) : 10.0 - 0.001 * (i % 13));
  const auto init = em_initial_model(1.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(em_fit(samples, init));
}
BENCHMARK(BM_EmFit)->Arg(50)->Arg(500);

void BM_Windowize(benchmark::State& state) {
  const auto& trace = dos_trace();
  for (auto _ : state) benchmark::DoNotOptimize(windowize(trace.records));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.records.size()));
}
BENCHMARK(BM_Windowize)->Unit(benchmark::kMillisecond);

void BM_ParseTrace(benchmark::State& state) {
  std::ostringstream out;
  write_trace(out, dos_trace().records);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_trace(in));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseTrace)->Unit(benchmark::kMillisecond);

void BM_RunPipeline(benchmark::State& state) {
  const auto& trace = dos_trace();
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(trace, DetectorConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.records.size()));
}
BENCHMARK(BM_RunPipeline)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(simulate(ScenarioConfig{}, {}));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
