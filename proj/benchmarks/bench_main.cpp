#include <benchmark/benchmark.h>

#include <random>

#include "uwb/channel.hpp"
#include "uwb/harness.hpp"
#include "uwb/receiver.hpp"
#include "uwb/spectrum.hpp"

using namespace uwb;

namespace {

Bits random_bits(std::size_t n) {
  std::mt19937 rng(1);
  Bits b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1u);
  return b;
}

}  // namespace

static void BM_Modulate(benchmark::State& state) {
  const auto cfg = default_link(scheme::Ppm{});
  const auto bits = random_bits(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(modulate(bits, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Modulate)->Arg(1000)->Arg(10000);

static void BM_Awgn(benchmark::State& state) {
  const auto cfg = default_link(scheme::BiPhase{});
  const auto tx = modulate(random_bits(1000), cfg);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(apply_awgn(tx, 1.0, 6.0, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tx.size()));
}
BENCHMARK(BM_Awgn);

static void BM_SyncFullFrame(benchmark::State& state) {
  const auto cfg = default_link(scheme::Ppm{});
  Bits bits = preamble_bits();
  const auto rx = apply_awgn(apply_perfect(modulate(bits, cfg), PerfectChannel{777 / cfg.sample_rate, 1.0}),
                             1.0, 0.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(search_sync(rx, cfg, bits, cfg.timing.frame_duration()));
}
BENCHMARK(BM_SyncFullFrame);

static void BM_BerBlock(benchmark::State& state) {
  ExperimentConfig c;
  c.link = default_link(scheme::BiPhase{});
  c.bits_per_point = 1000;
  c.block_bits = 1000;
  c.ebn0_grid = {4.0};
  for (auto _ : state) benchmark::DoNotOptimize(run_ber_point(c, 4.0));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_BerBlock);

static void BM_Psd(benchmark::State& state) {
  const auto train = pulse_train(default_link(), 2000);
  for (auto _ : state) benchmark::DoNotOptimize(psd(train, 16384));
}
BENCHMARK(BM_Psd);
BENCHMARK_MAIN();
