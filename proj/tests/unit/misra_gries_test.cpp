#include <map>

#include <gtest/gtest.h>

#include "pickdrop/misra_gries.hpp"
#include "test_support.hpp"

namespace pickdrop {
namespace {

TEST(MisraGries, EmptyGivesSentinel) {
  EXPECT_TRUE(MisraGries(4).best().is_sentinel());
}

TEST(MisraGries, ExactWhenFewDistinct) {
  MisraGries mg(3);
  for (ElementId x : {1, 2, 1, 3, 1}) mg.push(x);
  EXPECT_EQ(mg.best(), (Estimate{1, 3}));
}

TEST(MisraGries, TiesGoToSmallerId) {
  MisraGries mg(3);
  for (ElementId x : {4, 2, 4, 2}) mg.push(x);
  EXPECT_EQ(mg.best(), (Estimate{2, 2}));
}

TEST(MisraGries, LowerBoundWithinGuarantee) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t capacity = 1 + seed % 9;
    auto items = testing::random_items(500, 40, seed);
    for (std::size_t i = 0; i < items.size(); i += 3) items[i] = 7;
    MisraGries mg(capacity);
    std::map<ElementId, std::uint64_t> freq;
    for (ElementId x : items) {
      mg.push(x);
      ++freq[x];
    }
    const Estimate e = mg.best();
    ASSERT_LE(e.count, freq[e.element]);
    // The heaviest element survives with at least f - m / (capacity + 1).
    const double slack = static_cast<double>(items.size()) / static_cast<double>(capacity + 1);
    ASSERT_GE(static_cast<double>(e.count), static_cast<double>(freq[7]) - slack);
  }
}

}  // namespace
}  // namespace pickdrop
