#include <set>

#include <gtest/gtest.h>

#include "pickdrop/generators.hpp"
#include "test_support.hpp"

namespace pickdrop {
namespace {

using testing::error_kind;

GeneratorSpec planted(std::uint64_t n, std::uint64_t m, std::uint64_t f, Placement p) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kPlantedHeavy;
  spec.universe = n;
  spec.length = m;
  spec.heavy_frequency = f;
  spec.placement = p;
  spec.seed = 3;
  return spec;
}

TEST(Generators, NamesRoundTrip) {
  for (auto kind : {GeneratorKind::kPlantedHeavy, GeneratorKind::kZipf,
                    GeneratorKind::kUniformDistinct, GeneratorKind::kAllEqual,
                    GeneratorKind::kPromiseCase1, GeneratorKind::kPromiseCase2,
                    GeneratorKind::kAdversarialPlacement}) {
    EXPECT_EQ(parse_generator_kind(to_string(kind)), kind);
  }
  for (auto p : {Placement::kUniformRows, Placement::kBurstyPrefix, Placement::kRandom}) {
    EXPECT_EQ(parse_placement(to_string(p)), p);
  }
  EXPECT_FALSE(parse_generator_kind("nope"));
}

TEST(Generators, PlantedFrequencies) {
  for (auto p : {Placement::kUniformRows, Placement::kBurstyPrefix, Placement::kRandom}) {
    const Stream s = generate(planted(256, 4096, 200, p));
    const ExactStats stats(s);
    EXPECT_EQ(s.size(), 4096u);
    EXPECT_EQ(stats.frequency(kPlantedId), 200u);
    // 3896 others over 255 ids: 71 ids get 16, the rest 15.
    EXPECT_EQ(stats.frequency(2), 16u);
    EXPECT_EQ(stats.frequency(256), 15u);
  }
}

TEST(Generators, SpecExamplePlantedStreamIsNotHeavy) {
  // n = 256, m = 4096, f = 200: 200^3 = 8.0e6 while the others carry
  // 71 * 16^3 + 184 * 15^3 = 911,816, so 100x that is 9.1e7.
  const ExactStats stats(generate(planted(256, 4096, 200, Placement::kUniformRows)));
  EXPECT_EQ(to_string(stats.residual_moment(3, kPlantedId)), "911816");
  EXPECT_FALSE(stats.is_heavy(kPlantedId, 3));
}

TEST(Generators, PlacementShapes) {
  const Stream bursty = generate(planted(64, 1000, 100, Placement::kBurstyPrefix));
  for (std::size_t i = 0; i < 100; ++i) ASSERT_EQ(bursty.items()[i], kPlantedId);
  EXPECT_NE(bursty.items()[100], kPlantedId);

  const Stream even = generate(planted(64, 1000, 100, Placement::kUniformRows));
  std::size_t last = 0;
  bool first = true;
  for (std::size_t i = 0; i < even.size(); ++i) {
    if (even.items()[i] != kPlantedId) continue;
    if (!first) EXPECT_EQ(i - last, 10u);
    last = i;
    first = false;
  }
}

TEST(Generators, AdversarialIsBurstyPrefix) {
  auto spec = planted(64, 500, 40, Placement::kUniformRows);
  spec.kind = GeneratorKind::kAdversarialPlacement;
  const Stream s = generate(spec);
  for (std::size_t i = 0; i < 40; ++i) ASSERT_EQ(s.items()[i], kPlantedId);
}

TEST(Generators, UniformDistinct) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kUniformDistinct;
  spec.universe = 100'000;
  spec.length = 1000;
  const Stream s = generate(spec);
  EXPECT_EQ(std::set<ElementId>(s.items().begin(), s.items().end()).size(), 1000u);
  spec.length = 100'001;
  EXPECT_EQ(error_kind([&] { generate(spec); }), ErrorKind::kUsage);
}

TEST(Generators, AllEqual) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kAllEqual;
  spec.universe = 1;
  spec.length = 10;
  const Stream s = generate(spec);
  EXPECT_EQ(s.size(), 10u);
  EXPECT_TRUE(std::ranges::all_of(s.items(), [](ElementId x) { return x == 1; }));
}

TEST(Generators, ZipfIsSkewedTowardSmallIds) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kZipf;
  spec.universe = 1000;
  spec.length = 50'000;
  const ExactStats stats(generate(spec));
  // P(1) = 1 / H_{1000,1.5} = 0.39229.
  EXPECT_NEAR(static_cast<double>(stats.frequency(1)) / 50'000, 0.39229, 0.01);
  EXPECT_GT(stats.frequency(1), stats.frequency(2));
}

TEST(Generators, PromiseMatrices) {
  EXPECT_EQ(promise_shape(256, 3).rows, 7u);
  EXPECT_EQ(promise_shape(256, 3).cols, 36u);
  EXPECT_EQ(promise_shape(64, 3).rows, 4u);  // 4^3 = 64 exactly
  EXPECT_EQ(promise_shape(65, 3).rows, 5u);

  GeneratorSpec spec;
  spec.universe = 256;
  spec.kind = GeneratorKind::kPromiseCase1;
  const Stream c1 = generate(spec);
  EXPECT_EQ(c1.size(), 252u);
  EXPECT_EQ(std::set<ElementId>(c1.items().begin(), c1.items().end()).size(), 252u);

  spec.kind = GeneratorKind::kPromiseCase2;
  const Stream c2 = generate(spec);
  const ExactStats stats(c2);
  EXPECT_EQ(stats.frequency(kPlantedId), 7u);
  EXPECT_EQ(stats.distinct(), 252u - 7 + 1);
  for (std::size_t row = 0; row < 7; ++row) {
    const auto cells = c2.items().subspan(row * 36, 36);
    EXPECT_EQ(std::count(cells.begin(), cells.end(), kPlantedId), 1);
  }
}

TEST(Generators, PlantedMatrixSpreadsAcrossRows) {
  const Stream s = planted_matrix(4, 10, 6, Placement::kUniformRows, 1);
  const MatrixOverlay ov(s.items(), 4, 10);
  EXPECT_EQ(row_frequency(ov, kPlantedId, 1), 2u);
  EXPECT_EQ(row_frequency(ov, kPlantedId, 2), 2u);
  EXPECT_EQ(row_frequency(ov, kPlantedId, 3), 1u);
  EXPECT_EQ(row_frequency(ov, kPlantedId, 4), 1u);
  EXPECT_EQ(ExactStats(s).distinct(), 40u - 6 + 1);
  EXPECT_EQ(s.universe(), 35u);
}

TEST(Generators, InconsistentSpecs) {
  EXPECT_EQ(error_kind([] { generate(planted(256, 100, 101, Placement::kRandom)); }),
            ErrorKind::kUsage);
  EXPECT_EQ(error_kind([] { generate(planted(256, 100, 0, Placement::kRandom)); }),
            ErrorKind::kUsage);
  EXPECT_EQ(error_kind([] { planted_matrix(2, 3, 7, Placement::kRandom, 0); }),
            ErrorKind::kUsage);
}

TEST(Generators, SameSeedSameStream) {
  const auto spec = planted(128, 2000, 50, Placement::kRandom);
  const Stream a = generate(spec);
  const Stream b = generate(spec);
  EXPECT_TRUE(std::ranges::equal(a.items(), b.items()));
}

}  // namespace
}  // namespace pickdrop
