// Serial reference vs OpenMP kernels. Run with --benchmark_counters_tabular=true.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "synecg/dataset_pipeline.hpp"
#include "synecg/metrics_eval.hpp"
#include "synecg/peak_postprocess.hpp"

namespace {

using namespace synecg;

GenerationConfig bench_config() {
  GenerationConfig c;
  c.master_seed = 42;
  c.space.scale = ScaleCoefficients::uniform(2.0);
  return c;
}

void BM_GenerateSerial(benchmark::State& state) {
  const GenerationConfig config = bench_config();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_examples_serial(config, 0, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GenerateParallel(benchmark::State& state) {
  const GenerationConfig config = bench_config();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_examples(config, 0, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Records with a spike train and a smeared probability bump around every spike.
std::vector<DetectionInput> detection_inputs(std::size_t records, std::size_t length) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<DetectionInput> out(records);
  for (auto& r : out) {
    r.ecg.resize(length);
    r.avg.assign(length, 0.0);
    for (std::size_t i = 0; i < length; ++i) r.ecg[i] = jitter(rng);
    for (std::size_t p = 100; p < length; p += 200) {
      r.ecg[p] = 1.0;
      for (std::size_t k = p - 4; k <= p + 4 && k < length; ++k) {
        r.avg[k] = 0.9 * std::exp(-0.1 * static_cast<double>((k - p) * (k - p)));
      }
    }
  }
  return out;
}

void BM_DetectSerial(benchmark::State& state) {
  const auto inputs = detection_inputs(static_cast<std::size_t>(state.range(0)), 20000);
  for (auto _ : state) benchmark::DoNotOptimize(detect_records_serial(inputs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetectParallel(benchmark::State& state) {
  const auto inputs = detection_inputs(static_cast<std::size_t>(state.range(0)), 20000);
  for (auto _ : state) benchmark::DoNotOptimize(detect_records(inputs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

IndexTable shifted_table(std::size_t records, std::ptrdiff_t shift) {
  IndexTable t;
  for (std::size_t r = 0; r < records; ++r) {
    for (std::size_t i = 100; i < 20000; i += 200) {
      t.record.push_back(r);
      t.index.push_back(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + shift));
    }
  }
  return t;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const IndexTable truth = shifted_table(n, 0), detected = shifted_table(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_records_serial(truth, detected, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const IndexTable truth = shifted_table(n, 0), detected = shifted_table(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_records(truth, detected, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_GenerateSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DetectSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectParallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
