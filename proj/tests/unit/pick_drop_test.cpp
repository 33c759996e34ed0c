#include <gtest/gtest.h>

#include "pickdrop/pick_drop.hpp"
#include "pickdrop/verification.hpp"
#include "test_support.hpp"

namespace pickdrop {
namespace {

using testing::error_kind;

Estimate with_columns(const std::vector<ElementId>& items, std::uint64_t rows, std::uint64_t cols,
                      std::uint64_t lambda, std::vector<std::uint64_t> columns) {
  return run_with_columns(MatrixOverlay(items, rows, cols), lambda, columns);
}

TEST(PickDrop, AllOnesTwoByTwo) {
  const std::vector<ElementId> m{1, 1, 1, 1};
  EXPECT_EQ(with_columns(m, 2, 2, 1, {0, 0}), (Estimate{1, 4}));
  EXPECT_EQ(with_columns(m, 2, 2, 1, {0, 1}), (Estimate{1, 4}));
  // c = 1 < max(1, d = 2): dropped for the row-2 sample.
  EXPECT_EQ(with_columns(m, 2, 2, 1, {1, 0}), (Estimate{1, 2}));
  // c = 1 is not < max(1, 1): kept, and grows by the 2 ones of row 2.
  EXPECT_EQ(with_columns(m, 2, 2, 1, {1, 1}), (Estimate{1, 3}));
}

TEST(PickDrop, DistinctRowsKeepFirstSample) {
  const std::vector<ElementId> m{1, 2, 3, 4};
  EXPECT_EQ(with_columns(m, 2, 2, 1, {0, 1}), (Estimate{1, 1}));
  EXPECT_EQ(with_columns(m, 2, 2, 1, {1, 0}), (Estimate{2, 1}));
}

TEST(PickDrop, LambdaBudgetForcesDrop) {
  // Row 1: 5 7 | row 2: 6 5 | row 3: 9 5, always column 1. With lambda = 1 the
  // sample 5 survives both rows (1 < max(1, 1) and 2 < max(2, 1) both fail);
  // with lambda = 2 it is dropped at row 2 and 6 is dropped at row 3.
  const std::vector<ElementId> m{5, 7, 6, 5, 9, 5};
  EXPECT_EQ(with_columns(m, 3, 2, 1, {0, 0, 0}), (Estimate{5, 3}));
  EXPECT_EQ(with_columns(m, 3, 2, 2, {0, 0, 0}), (Estimate{9, 1}));
}

TEST(PickDrop, PaddingSampleFailsRun) {
  const std::vector<ElementId> m{1, 2, 3};
  EXPECT_TRUE(with_columns(m, 2, 2, 1, {0, 1}).is_sentinel());
  EXPECT_EQ(with_columns(m, 2, 2, 1, {0, 0}), (Estimate{1, 1}));
}

TEST(PickDrop, MatchesDefinitionalReplayOnEveryTuple) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SplitMix64 rng(seed);
    const std::uint64_t rows = 1 + uniform_below(rng, 4);
    const std::uint64_t cols = 1 + uniform_below(rng, 4);
    const std::uint64_t lambda = 1 + uniform_below(rng, 3);
    const std::uint64_t m = rows * cols - uniform_below(rng, cols);
    const auto items = testing::random_items(m, 1 + uniform_below(rng, 4), seed);
    const MatrixOverlay ov(items, rows, cols);
    const RecurrenceTable table(ov, lambda);
    std::vector<std::uint64_t> columns(rows, 0);
    while (true) {
      ASSERT_EQ(run_with_columns(ov, lambda, columns), table.replay(columns)) << "seed " << seed;
      std::size_t i = 0;
      while (i < rows && ++columns[i] == cols) columns[i++] = 0;
      if (i == rows) break;
    }
  }
}

TEST(PickDrop, CounterNeverExceedsFrequency) {
  for (std::uint64_t seed = 0; seed < 10'000; ++seed) {
    SplitMix64 rng(derive_seed(seed, 7));
    const std::uint64_t rows = 1 + uniform_below(rng, 8);
    const std::uint64_t cols = 1 + uniform_below(rng, 8);
    const std::uint64_t lambda = 1 + uniform_below(rng, 4);
    const auto items = testing::random_items(rows * cols, 1 + uniform_below(rng, 6), seed);
    const MatrixOverlay ov(items, rows, cols);
    const Estimate e = run(ov, {rows, cols, lambda, seed});
    ASSERT_FALSE(e.is_sentinel());
    const auto f = static_cast<std::uint64_t>(std::count(items.begin(), items.end(), e.element));
    ASSERT_GE(e.count, 1u);
    ASSERT_LE(e.count, f) << "seed " << seed;
  }
}

TEST(PickDrop, SameSeedSameResult) {
  const auto items = testing::random_items(60, 5, 1);
  const MatrixOverlay ov(items, 6, 10);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_EQ(run(ov, {6, 10, 2, seed}), run(ov, {6, 10, 2, seed}));
  }
}

TEST(PickDrop, StreamingMatchesOverlayAndReadsOnce) {
  const auto items = testing::random_items(53, 4, 9);
  const MatrixOverlay ov(items, 6, 9);  // one padding cell
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::vector<ElementId> padded(items);
    padded.push_back(kSentinel);
    // Sentinels are not valid stream items, so feed the run directly.
    PickDropRun runner({6, 9, 1, seed}, RandomColumns(seed));
    for (ElementId x : padded) runner.push(x);
    EXPECT_EQ(runner.finish(), run(ov, {6, 9, 1, seed}));
  }
  const auto full = testing::random_items(54, 4, 9);
  testing::ConsumingSource source(full, 5);
  const Estimate streamed = run_streaming(source, {6, 9, 1, 4});
  EXPECT_EQ(source.consumed(), full.size());
  EXPECT_EQ(streamed, run(MatrixOverlay(full, 6, 9), {6, 9, 1, 4}));
}

TEST(PickDrop, StreamingLengthMismatch) {
  const auto items = testing::random_items(10, 3, 1);
  testing::ConsumingSource short_source(items);
  EXPECT_EQ(error_kind([&] { run_streaming(short_source, {3, 4, 1, 0}); }),
            ErrorKind::kDimension);
  testing::ConsumingSource long_source(items);
  EXPECT_EQ(error_kind([&] { run_streaming(long_source, {3, 3, 1, 0}); }), ErrorKind::kDimension);
}

TEST(PickDrop, FinishNeedsAllRows) {
  PickDropRun runner({2, 2, 1, 0}, RandomColumns(0));
  runner.push(1);
  runner.push(2);
  EXPECT_EQ(runner.rows_completed(), 1u);
  EXPECT_EQ(error_kind([&] { runner.finish(); }), ErrorKind::kDimension);
}

TEST(PickDrop, RejectsZeroParameters) {
  EXPECT_EQ(error_kind([] { validate({0, 1, 1, 0}); }), ErrorKind::kUsage);
  EXPECT_EQ(error_kind([] { validate({1, 0, 1, 0}); }), ErrorKind::kUsage);
  EXPECT_EQ(error_kind([] { validate({1, 1, 0, 0}); }), ErrorKind::kUsage);
  const std::vector<ElementId> items{1, 2};
  EXPECT_EQ(error_kind([&] { run(MatrixOverlay(items, 1, 2), {2, 1, 1, 0}); }),
            ErrorKind::kDimension);
}

TEST(PickDrop, StateHasFixedFootprint) {
  static_assert(std::is_trivially_copyable_v<PickDropState>);
  static_assert(sizeof(PickDropState) <= 64);
  // The state after many rows occupies the same bytes as a fresh one.
  PickDropRun runner({1000, 4, 1, 0}, RandomColumns(0));
  const auto items = testing::random_items(4000, 3, 2);
  for (ElementId x : items) runner.push(x);
  EXPECT_EQ(sizeof(runner.state()), sizeof(PickDropState));
  EXPECT_FALSE(runner.finish().is_sentinel());
}

}  // namespace
}  // namespace pickdrop
