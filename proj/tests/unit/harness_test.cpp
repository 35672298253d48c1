#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "dynsample/harness/bench.hpp"
#include "dynsample/harness/welford.hpp"
#include "dynsample/random_source.hpp"

using namespace dynsample;
using namespace dynsample::harness;

TEST(Welford, SmallStream) {
  WelfordAccumulator acc;
  for (double x : {1.0, 2.0, 3.0}) acc.push(x);
  EXPECT_EQ(acc.count, 3u);
  EXPECT_DOUBLE_EQ(acc.mean, 2.0);
  EXPECT_DOUBLE_EQ(acc.variance(), 1.0);
}

TEST(Welford, ConstantStream) {
  WelfordAccumulator acc;
  for (int i = 0; i < 1'000'000; ++i) acc.push(0.1);
  EXPECT_NEAR(acc.variance(), 0.0, 1e-12);
  EXPECT_NEAR(acc.mean, 0.1, 1e-15);
}

TEST(Welford, SingleSampleVarianceZero) {
  WelfordAccumulator acc;
  acc.push(5.0);
  EXPECT_EQ(acc.variance(), 0.0);
}

TEST(Welford, UniformMoments) {
  RandomSource rng(12);
  WelfordAccumulator acc;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) acc.push(rng.uniform());
  EXPECT_NEAR(acc.mean, 0.5, 3 * std::sqrt(1.0 / 12 / n));
  // Var of the sample variance for U(0,1): (mu4 - sigma^4)/n = (1/80 - 1/144)/n.
  EXPECT_NEAR(acc.variance(), 1.0 / 12, 3 * std::sqrt((1.0 / 80 - 1.0 / 144) / n));
}

TEST(Welford, MatchesTwoPass) {
  RandomSource rng(13);
  std::vector<double> xs;
  for (int i = 0; i < 1'000'000; ++i) xs.push_back(1e6 + std::ldexp(rng.uniform(), static_cast<int>(rng.below(20)) - 10));
  WelfordAccumulator acc;
  for (double x : xs) acc.push(x);
  long double m = 0;
  for (double x : xs) m += x;
  m /= xs.size();
  long double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = static_cast<double>(ss / (xs.size() - 1));
  EXPECT_NEAR(acc.mean, static_cast<double>(m), 1e-9 * std::abs(static_cast<double>(m)));
  EXPECT_NEAR(acc.variance(), var, 1e-9 * var);
}

TEST(Harness, OracleSmoke) {
  BenchConfig cfg;
  cfg.method = Method::Oracle;
  cfg.n = 1;
  cfg.reps = 20;
  cfg.ops_per_rep = 100;
  const auto r = run_benchmark(cfg);
  EXPECT_FALSE(r.failed());
  EXPECT_GT(r.time_ns.mean, 0.0);
  EXPECT_FALSE(r.attempts.has_value());
  EXPECT_EQ(r.op_count, 2000u);
}

TEST(Harness, RejectionAttemptsNearTwo) {
  BenchConfig cfg;
  cfg.method = Method::Rejection;
  cfg.n = 10000;
  cfg.reps = 200;
  cfg.ops_per_rep = 1000;
  const auto r = run_benchmark(cfg);
  ASSERT_TRUE(r.attempts.has_value());
  EXPECT_NEAR(r.attempts->mean, 2.0, 0.1);
  ASSERT_TRUE(r.predicted_attempts.has_value());
  EXPECT_NEAR(*r.predicted_attempts, 2.0, 0.01);
}

TEST(Harness, SameSeedSameNonTimingColumns) {
  for (auto m : {Method::Tree, Method::Rejection, Method::Cr, Method::Oracle}) {
    BenchConfig cfg;
    cfg.method = m;
    cfg.dist = RateDistribution::LogUniform;
    cfg.workload = Workload::Mixed;
    cfg.reps = 10;
    cfg.ops_per_rep = 100;
    cfg.seed = 77;
    auto a = run_benchmark(cfg), b = run_benchmark(cfg);
    a.time_ns = b.time_ns = {};
    EXPECT_EQ(csv_row(a), csv_row(b));
  }
}

TEST(Harness, ValidateRejectsBadConfigs) {
  BenchConfig cfg;
  cfg.n = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.ratio = 1.5;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.n = 2'000'000;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg.max_n = 10'000'000;
  EXPECT_NO_THROW(validate(cfg));
  cfg = {};
  cfg.method = Method::Cr;
  cfg.c = 1.0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Harness, ParseNames) {
  EXPECT_EQ(parse_method("cr"), Method::Cr);
  EXPECT_FALSE(parse_method("alias").has_value());
  EXPECT_EQ(parse_workload("update"),
            (std::vector<Workload>{Workload::UpdateExtracted, Workload::UpdateArbitrary}));
  EXPECT_EQ(parse_workload("mixed"), std::vector<Workload>{Workload::Mixed});
}

TEST(Grid, EmptyGridGivesHeaderOnly) {
  const auto grid = parse_grid("");
  EXPECT_TRUE(grid.empty);
  std::ostringstream out;
  write_csv(out, sweep(grid, BenchConfig{}));
  EXPECT_EQ(out.str(), csv_header() + "\n");
}

TEST(Grid, ParseAndExpand) {
  const auto grid = parse_grid("method=tree,cr;n=1e2..1e4;c=2,e");
  EXPECT_EQ(grid.ns, (std::vector<std::uint64_t>{100, 1000, 10000}));
  ASSERT_EQ(grid.cs.size(), 2u);
  EXPECT_DOUBLE_EQ(grid.cs[1], std::numbers::e);
  const auto cells = expand(grid, BenchConfig{});
  // tree: 3 n values; cr: 3 n values x 2 c values.
  EXPECT_EQ(cells.size(), 9u);
  EXPECT_THROW(parse_grid("color=red"), ConfigError);
  EXPECT_THROW(parse_grid("n=abc"), ConfigError);
}

TEST(Grid, PredictedColumnMinimisedAtE) {
  const auto grid = parse_grid("method=cr;c=1.5,2,e,3.5,5");
  BenchConfig base;
  base.reps = 2;
  base.ops_per_rep = 10;
  const auto records = sweep(grid, base);
  ASSERT_EQ(records.size(), 5u);
  double best = INFINITY, at = 0;
  for (const auto& r : records) {
    ASSERT_TRUE(r.predicted_attempts.has_value());
    if (*r.predicted_attempts < best) best = *r.predicted_attempts, at = r.config.c;
  }
  EXPECT_EQ(at, std::numbers::e);
}

TEST(Csv, ColumnOrder) {
  EXPECT_EQ(csv_header(),
            "method,dist,n,ratio,c,workload,op_count,mean_ns,stddev_ns,attempts_mean,"
            "attempts_stddev,predicted_attempts,seed,rng_name");
  BenchConfig cfg;
  cfg.method = Method::Tree;
  cfg.reps = 2;
  cfg.ops_per_rep = 5;
  const std::string row = csv_row(run_benchmark(cfg));
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 13);
  EXPECT_EQ(row.rfind("tree,uniform,1000,0.001,,extract,10,", 0), 0u) << row;
  EXPECT_NE(row.find(",1,mt19937_64"), std::string::npos) << row;
}

TEST(Csv, FailedCellHasEmptyStats) {
  BenchRecord r;
  r.config.method = Method::Rejection;
  r.error = "boom";
  const std::string row = csv_row(r);
  EXPECT_NE(row.find(",,,,,,"), std::string::npos) << row;
}

TEST(Csv, FormatNumberRoundTrips) {
  EXPECT_EQ(format_number(0.001), "0.001");
  EXPECT_EQ(std::stod(format_number(std::numbers::e)), std::numbers::e);
}
