#include <gtest/gtest.h>

#include <vector>

#include "dynsample/random_source.hpp"

using dynsample::RandomSource;

TEST(RandomSource, SameSeedSameSequence) {
  RandomSource a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomSource, ReseedRestarts) {
  RandomSource a(7);
  std::vector<double> first;
  for (int i = 0; i < 10; ++i) first.push_back(a.uniform());
  a.seed(7);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.uniform(), first[i]);
}

TEST(RandomSource, UniformInUnitInterval) {
  RandomSource rng(1);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 3 * std::sqrt(1.0 / 12 / 100000) * 1.5);
}

TEST(RandomSource, BoundedUniformStaysBelowBound) {
  RandomSource rng(2);
  for (double bound : {1e-300, 0.1, 3.0, 1e300}) {
    for (int i = 0; i < 10000; ++i) {
      const double x = rng.uniform(bound);
      ASSERT_GE(x, 0.0);
      ASSERT_LT(x, bound);
    }
  }
}

TEST(RandomSource, BelowCoversRange) {
  RandomSource rng(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.below(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 400);
  EXPECT_EQ(rng.below(1), 0u);
}
