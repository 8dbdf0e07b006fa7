#include <gtest/gtest.h>

#include <vector>

#include "ideation/error.hpp"
#include "ideation/rng.hpp"

using namespace ideation;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, Uniform01StaysInHalfOpenUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, UniformIndexCoversRange) {
  Rng rng(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.uniform_index(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, WeightedIndexNeverPicksZeroWeight) {
  Rng rng(5);
  const std::vector<double> w = {0.0, 1.0, 0.0, 3.0};
  for (int i = 0; i < 2000; ++i) {
    const auto k = rng.weighted_index(w);
    ASSERT_TRUE(k == 1 || k == 3);
  }
}

TEST(Rng, DerivedSeedsDifferByStream) {
  EXPECT_NE(derive_seed(1, "team"), derive_seed(1, "topic"));
  EXPECT_NE(derive_seed(1, "team"), derive_seed(2, "team"));
  EXPECT_EQ(derive_seed(9, "team"), derive_seed(9, "team"));
}

TEST(Rng, Fnv1aKnownVector) {
  // Published FNV-1a 64 test vectors.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(11);
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sorted[i], i);
}
