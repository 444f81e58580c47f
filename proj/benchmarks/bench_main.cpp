#include <benchmark/benchmark.h>

#include <random>

#include "flashmod/channel.hpp"
#include "flashmod/codebook.hpp"
#include "flashmod/experiment.hpp"
#include "flashmod/pipeline.hpp"
#include "flashmod/rll.hpp"

using namespace flashmod;

namespace {

BitString random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitString b(n);
  for (auto& x : b) x = rng() & 1;
  return b;
}

void BM_Rll17Encode(benchmark::State& state) {
  const auto data = random_bits(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(rll17_encode(data));
  state.SetBytesProcessed(state.iterations() * state.range(0) / 8);
}
BENCHMARK(BM_Rll17Encode)->Arg(4096)->Arg(1 << 16);

void BM_Rll17Decode(benchmark::State& state) {
  const auto coded = rll17_encode(random_bits(static_cast<std::size_t>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(rll17_decode(coded));
}
BENCHMARK(BM_Rll17Decode)->Arg(4096)->Arg(1 << 16);

void BM_CodebookEncode(benchmark::State& state) {
  const auto cb = codebook_preset("mlc2-q-cb1");
  const auto data = random_bits(8 * 4096, 3);
  for (auto _ : state) benchmark::DoNotOptimize(cb->encode(data));
}
BENCHMARK(BM_CodebookEncode);

void BM_ApplyInterference(benchmark::State& state) {
  const auto d = StateDistribution::slc_default();
  const auto block = random_block(scheme_preset("slc-conv"), 64, 3072, 4);
  const auto cells = program_grid(block, d, 5);
  const auto p = CouplingParams::effective(0.2, 0.08, 0.006, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_interference(cells, p, d));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(block.size()));
}
BENCHMARK(BM_ApplyInterference);

void BM_SweepTrial(benchmark::State& state) {
  SweepConfig sweep;
  const Arm arm{"", state.range(0) ? "slc-rll" : "slc-conv", state.range(0) ? "mod-3/4" : "conv-1/2", true};
  auto cfg = arm_config(arm, sweep);
  cfg.coupling = cfg.coupling.with_effective_x(0.3);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_point(cfg, 1, seed++, 1));
}
BENCHMARK(BM_SweepTrial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
