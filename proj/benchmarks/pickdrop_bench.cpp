#include <benchmark/benchmark.h>

#include "pickdrop/generators.hpp"
#include "pickdrop/heavy_hitter.hpp"
#include "pickdrop/moment_estimator.hpp"
#include "pickdrop/pick_drop.hpp"
#include "pickdrop/verification.hpp"

namespace pd = pickdrop;

namespace {

pd::Stream zipf(std::uint64_t n, std::uint64_t m) {
  pd::GeneratorSpec spec;
  spec.kind = pd::GeneratorKind::kZipf;
  spec.universe = n;
  spec.length = m;
  spec.seed = 1;
  return pd::generate(spec);
}

void BM_PickDropRun(benchmark::State& state) {
  const auto m = static_cast<std::uint64_t>(state.range(0));
  const pd::Stream s = zipf(4096, m);
  const std::uint64_t cols = 64;
  const std::uint64_t rows = (m + cols - 1) / cols;
  const pd::MatrixOverlay ov(s.items(), rows, cols);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pd::run(ov, {rows, cols, 2, seed++}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}
BENCHMARK(BM_PickDropRun)->Arg(1 << 12)->Arg(1 << 16);

void BM_HeavyHitter(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const pd::Stream s = zipf(n, 4 * n);
  pd::HeavyHitterConfig cfg;
  cfg.universe = n;
  cfg.mode = state.range(1) ? pd::LengthMode::kKnown : pd::LengthMode::kDoubling;
  cfg.length = s.size();
  for (auto _ : state) {
    pd::SpanSource source(s.items());
    benchmark::DoNotOptimize(pd::find_heavy(source, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_HeavyHitter)->ArgsProduct({{256, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EstimateFk(benchmark::State& state) {
  const pd::Stream s = zipf(4096, 16'384);
  pd::MomentConfig cfg;
  cfg.universe = 4096;
  cfg.trials = 1;
  for (auto _ : state) {
    pd::SpanSource source(s.items());
    benchmark::DoNotOptimize(pd::estimate_fk(source, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_EstimateFk)->Unit(benchmark::kMillisecond);

void BM_ExactDistribution(benchmark::State& state) {
  const auto cols = static_cast<std::uint64_t>(state.range(0));
  std::vector<pd::ElementId> items(4 * cols);
  for (std::size_t i = 0; i < items.size(); ++i) items[i] = 1 + i % 5;
  const pd::MatrixOverlay ov(items, 4, cols);
  for (auto _ : state) benchmark::DoNotOptimize(pd::exact_distribution(ov, 1));
  state.counters["tuples"] = static_cast<double>(cols * cols * cols * cols);
}
BENCHMARK(BM_ExactDistribution)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
