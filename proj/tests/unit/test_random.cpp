#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rmc/random.hpp"

using namespace rmc;

TEST(CounterRng, SplitMixSequence) {
  // Reference values of SplitMix64 seeded with 0.
  CounterRng rng(0);
  EXPECT_EQ(rng.next_u64(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next_u64(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next_u64(), 0x06C45D188009454FULL);
  EXPECT_EQ(rng.counter(), 3u);
}

TEST(CounterRng, UniformRangeAndMoments) {
  CounterRng rng(42);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - 0.25, 1.0 / 12.0, 0.005);
}

TEST(CounterRng, NormalMoments) {
  CounterRng rng(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    ASSERT_TRUE(std::isfinite(z));
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(CounterRng, BelowStaysInRange) {
  CounterRng rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(DeriveSeed, DistinctPurposesAndCoordinates) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 3; ++a)
    for (std::uint64_t i = 0; i < 20; ++i)
      for (std::uint64_t j = 0; j < 20; ++j)
        for (std::uint64_t t = 0; t < 10; ++t) seeds.insert(derive_seed(1, tag_of("trial"), {a, i, j, t}));
  EXPECT_EQ(seeds.size(), 3u * 20 * 20 * 10);
  EXPECT_NE(derive_seed(1, tag_of("mask")), derive_seed(1, tag_of("outliers")));
  EXPECT_EQ(derive_seed(9, tag_of("x"), {1, 2}), derive_seed(9, tag_of("x"), {1, 2}));
  EXPECT_NE(derive_seed(9, tag_of("x"), {1, 2}), derive_seed(9, tag_of("x"), {2, 1}));
}

TEST(TagOf, Fnv1a) {
  EXPECT_EQ(tag_of(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(tag_of("a"), 0xAF63DC4C8601EC8CULL);
}
