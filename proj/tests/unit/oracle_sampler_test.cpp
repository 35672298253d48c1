#include <gtest/gtest.h>

#include <vector>

#include "dynsample/oracle_sampler.hpp"
#include "stat_checks.hpp"

using namespace dynsample;

TEST(CumulativeArray, PrefixSums) {
  CumulativeArray a;
  const std::vector<double> rates{1, 2, 3};
  a.rebuild(rates);
  ASSERT_EQ(a.entries().size(), 3u);
  EXPECT_EQ(a.entries()[0], 1.0);
  EXPECT_EQ(a.entries()[1], 3.0);
  EXPECT_EQ(a.entries()[2], 6.0);
  EXPECT_EQ(a.select(0.999), 0u);
  EXPECT_EQ(a.select(1.0), 1u);
  EXPECT_EQ(a.select(5.999), 2u);
}

TEST(CumulativeArray, Empty) {
  CumulativeArray a;
  a.rebuild({});
  EXPECT_TRUE(a.empty());
  EXPECT_EQ(a.total(), 0.0);
  OracleSampler s;
  RandomSource rng(1);
  EXPECT_THROW(s.extract(rng), EmptyStructure);
}

TEST(CumulativeArray, MonotoneAndCompensatedTotal) {
  RandomSource rng(4);
  std::vector<double> rates;
  for (int i = 0; i < 10000; ++i) rates.push_back(rng.uniform() * std::pow(10.0, rng.below(12) - 6.0));
  CumulativeArray a;
  a.rebuild(rates);
  for (std::size_t i = 1; i < rates.size(); ++i) ASSERT_LE(a.entries()[i - 1], a.entries()[i]);
  double sum = 0, comp = 0;
  for (double r : rates) {
    const double y = r - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  EXPECT_NEAR(a.total(), sum, 1e-12 * sum);
}

TEST(OracleSampler, ChiSquareOneTwoThree) {
  OracleSampler s;
  for (std::uint64_t i = 0; i < 3; ++i) s.add({i}, static_cast<double>(i + 1));
  RandomSource rng(6);
  const auto counts = dynsample::testing::extraction_counts(s, 3, 1'000'000, rng);
  EXPECT_GT(dynsample::testing::chi_square_gof(counts, {1, 2, 3}).p_value, 1e-3);
}

TEST(OracleSampler, EraseKeepsHandles) {
  OracleSampler s;
  auto a = s.add({0}, 1.0);
  auto b = s.add({1}, 0.0);
  auto c = s.add({2}, 2.0);
  EXPECT_EQ(s.size(), 2u);
  s.erase(a);
  EXPECT_EQ(s.payload(c).value, 2u);
  EXPECT_EQ(s.rate(b), 0.0);
  EXPECT_EQ(s.select(0.0).handle, c);
  EXPECT_EQ(s.check_invariants(), "");
  EXPECT_THROW(s.update(a, 1.0), StaleHandle);
}
