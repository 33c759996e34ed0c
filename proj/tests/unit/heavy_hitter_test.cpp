#include <map>

#include <gtest/gtest.h>

#include "pickdrop/generators.hpp"
#include "pickdrop/heavy_hitter.hpp"
#include "test_support.hpp"

namespace pickdrop {
namespace {

using testing::error_kind;

HeavyReport find(const std::vector<ElementId>& items, const HeavyHitterConfig& cfg) {
  SpanSource source(items);
  return find_heavy(source, cfg);
}

HeavyHitterConfig config(std::uint64_t n, std::uint64_t m, LengthMode mode, std::uint64_t seed) {
  HeavyHitterConfig cfg;
  cfg.universe = n;
  cfg.length = m;
  cfg.mode = mode;
  cfg.seed = seed;
  return cfg;
}

TEST(Aggregate, MaxByCountThenSmallerId) {
  const Estimate a{3, 5}, b{2, 5}, c{9, 7}, none{};
  EXPECT_EQ(better(a, b), b);
  EXPECT_EQ(better(b, a), b);
  EXPECT_EQ(better(a, none), a);
  EXPECT_EQ(better(none, a), a);
  const std::vector<Estimate> all{a, none, c, b};
  EXPECT_EQ(aggregate(all), c);
  EXPECT_EQ(better(better(a, b), c), better(a, better(b, c)));
  EXPECT_EQ(error_kind([] { aggregate({}); }), ErrorKind::kUsage);
}

TEST(HeavyHitter, KnownLengthMustMatch) {
  const auto items = testing::random_items(100, 10, 1);
  auto cfg = config(10, 99, LengthMode::kKnown, 0);
  EXPECT_EQ(error_kind([&] { find(items, cfg); }), ErrorKind::kDimension);
}

TEST(HeavyHitter, RejectsItemsOutsideUniverse) {
  const std::vector<ElementId> items{1, 2, 11};
  EXPECT_EQ(error_kind([&] { find(items, config(10, 3, LengthMode::kKnown, 0)); }),
            ErrorKind::kFormat);
}

TEST(HeavyHitter, RejectsBadConfig) {
  auto cfg = config(10, 3, LengthMode::kKnown, 0);
  cfg.eps = 0;
  EXPECT_EQ(error_kind([&] { HeavyHitter h(cfg); }), ErrorKind::kUsage);
  cfg.eps = 0.25;
  cfg.k = 2;
  EXPECT_EQ(error_kind([&] { HeavyHitter h(cfg); }), ErrorKind::kUsage);
}

TEST(HeavyHitter, EmptyStream) {
  EXPECT_TRUE(find({}, config(10, 0, LengthMode::kDoubling, 0)).estimate.is_sentinel());
  EXPECT_TRUE(find({}, config(10, 0, LengthMode::kKnown, 0)).estimate.is_sentinel());
}

TEST(HeavyHitter, SoundOnRandomStreams) {
  for (std::uint64_t seed = 0; seed < 1500; ++seed) {
    SplitMix64 rng(seed);
    const std::uint64_t n = 2 + uniform_below(rng, 62);
    const std::uint64_t m = 1 + uniform_below(rng, 300);
    const auto items = testing::random_items(m, n, seed);
    auto cfg = config(n, m, seed % 2 ? LengthMode::kKnown : LengthMode::kDoubling, seed);
    cfg.fallback = seed % 3 != 0;
    const HeavyReport r = find(items, cfg);
    ASSERT_FALSE(r.estimate.is_sentinel());
    const auto f = static_cast<std::uint64_t>(std::count(items.begin(), items.end(), r.estimate.element));
    ASSERT_LE(r.estimate.count, f) << "seed " << seed;
    for (const auto& inst : r.instances) {
      if (inst.best.is_sentinel()) continue;
      const auto fi = static_cast<std::uint64_t>(std::count(items.begin(), items.end(), inst.best.element));
      ASSERT_LE(inst.best.count, fi);
    }
  }
}

TEST(HeavyHitter, DeterministicForSeedAndThreads) {
  const auto items = testing::random_items(20'000, 500, 3);
  auto cfg = config(500, items.size(), LengthMode::kDoubling, 42);
  const HeavyReport a = find(items, cfg);
  const HeavyReport b = find(items, cfg);
  cfg.threads = 3;
  const HeavyReport c = find(items, cfg);
  ASSERT_EQ(a.instances.size(), b.instances.size());
  ASSERT_EQ(a.instances.size(), c.instances.size());
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.estimate, c.estimate);
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    EXPECT_EQ(a.instances[i].best, b.instances[i].best);
    EXPECT_EQ(a.instances[i].best, c.instances[i].best);
  }
}

TEST(HeavyHitter, ReadsSourceOnce) {
  const auto items = testing::random_items(5000, 100, 8);
  testing::ConsumingSource source(items, 333);
  const HeavyReport r = find_heavy(source, config(100, items.size(), LengthMode::kKnown, 1));
  EXPECT_EQ(source.consumed(), items.size());
  EXPECT_EQ(source.empty_calls(), 1u);
  EXPECT_EQ(r.items, items.size());
}

TEST(HeavyHitter, MoreRepetitionsNeverHurt) {
  // Runs are seeded by index, so the runs for a smaller T are a prefix of the
  // runs for a larger one and the max can only grow.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorSpec spec;
    spec.universe = 512;
    spec.length = 2048;
    spec.heavy_frequency = 60;
    spec.placement = Placement::kRandom;
    spec.seed = seed;
    const Stream s = generate(spec);
    const std::vector<ElementId> items(s.items().begin(), s.items().end());
    auto cfg = config(512, 2048, LengthMode::kKnown, seed);
    cfg.fallback = false;
    std::uint64_t previous = 0;
    for (double c : {0.5, 1.0, 2.0, 4.0}) {
      cfg.reps_constant = c;
      const HeavyReport r = find(items, cfg);
      ASSERT_GE(r.estimate.count, previous) << "seed " << seed << ", constant " << c;
      previous = r.estimate.count;
    }
  }
}

TEST(HeavyHitter, KnownModeRunCountMatchesSchedule) {
  for (std::uint64_t n : {64u, 256u, 4096u}) {
    std::uint64_t expected = 0;
    for (std::uint64_t d : delta_grid(n, 3)) expected += repetitions(n, 3, 0.25, d);
    std::uint64_t seen = 0;
    for (std::uint64_t m : {n, 4 * n}) {
      const auto items = testing::random_items(m, n, m);
      const HeavyReport r = find(items, config(n, m, LengthMode::kKnown, 0));
      EXPECT_EQ(r.repetitions, expected);
      EXPECT_EQ(r.peak_live_runs, expected);
      if (seen) EXPECT_EQ(seen, r.peak_live_runs);
      seen = r.peak_live_runs;
    }
  }
}

TEST(HeavyHitter, DoublingOpensGenerationPerPowerOfTwo) {
  const auto items = testing::random_items(1000, 50, 2);
  const HeavyReport r = find(items, config(50, 0, LengthMode::kDoubling, 0));
  std::map<std::uint64_t, std::uint64_t> starts;
  for (const auto& inst : r.instances) starts[inst.generation_length] = inst.start;
  // Generations of length 1, 2, 4, ..., 1024 start at 0, 1, 2, 4, ..., 512.
  ASSERT_EQ(starts.size(), 11u);
  EXPECT_EQ(starts[1], 0u);
  EXPECT_EQ(starts[2], 1u);
  EXPECT_EQ(starts[1024], 512u);
}

TEST(HeavyHitter, MaxGenerationsBoundsLiveRuns) {
  const auto items = testing::random_items(1 << 14, 64, 4);
  auto cfg = config(64, 0, LengthMode::kDoubling, 0);
  cfg.max_generations = 2;
  const HeavyReport bounded = find(items, cfg);
  std::uint64_t per_generation = 0;
  for (std::uint64_t d : delta_grid(64, 3)) per_generation += repetitions(64, 3, 0.25, d);
  EXPECT_LE(bounded.peak_live_runs, 3 * per_generation);
  cfg.max_generations = 0;
  const HeavyReport all = find(items, cfg);
  EXPECT_GT(all.peak_live_runs, bounded.peak_live_runs);
}

TEST(HeavyHitter, FindsStrongPlantedElement) {
  GeneratorSpec spec;
  spec.universe = 4096;
  spec.length = 4295;
  spec.heavy_frequency = 200;
  spec.placement = Placement::kRandom;
  spec.seed = 1;
  const Stream s = generate(spec);
  ASSERT_TRUE(ExactStats(s).is_heavy(kPlantedId, 3));
  const std::vector<ElementId> items(s.items().begin(), s.items().end());
  int found = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto cfg = config(4096, items.size(), LengthMode::kKnown, seed);
    cfg.fallback = false;
    const HeavyReport r = find(items, cfg);
    found += r.estimate.element == kPlantedId;
  }
  EXPECT_GE(found, 5);
}

TEST(HeavyHitter, OverridesReplaceGrid) {
  const auto items = testing::random_items(300, 20, 6);
  auto cfg = config(20, 300, LengthMode::kKnown, 0);
  cfg.delta = 2;
  cfg.lambda = 3;
  cfg.cols = 17;
  const HeavyReport r = find(items, cfg);
  ASSERT_EQ(r.instances.size(), 1u);
  EXPECT_EQ(r.instances[0].params.delta, 2u);
  EXPECT_EQ(r.instances[0].params.lambda, 3u);
  EXPECT_EQ(r.instances[0].params.cols, 17u);
  EXPECT_EQ(r.instances[0].params.rows, 18u);
}

}  // namespace
}  // namespace pickdrop
