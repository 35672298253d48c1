#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dynsample/analytics.hpp"

using namespace dynsample;
using namespace dynsample::analytics;

namespace {

// Independent evaluation of sum_i rho_i (i + 1/p_i) by quadrature over the
// bands (max/c^(i+1), max/c^i], truncated at min. rho_i is the band's share
// of the total rate; p_i is the mean member rate over the band ceiling.
double quadrature_cr_cost(RateDistribution kind, double ratio, double c) {
  using boost::math::quadrature::gauss_kronrod;
  const double min = ratio, max = 1.0;
  auto f = [&](double x) {
    return kind == RateDistribution::Uniform ? 1.0 / (max - min) : 1.0 / (x * std::log(max / min));
  };
  auto xf = [&](double x) { return x * f(x); };
  double total_moment = 0;
  for (int i = 0;; ++i) {
    const double hi = max / std::pow(c, i);
    const double lo = std::max(max / std::pow(c, i + 1), min);
    total_moment += gauss_kronrod<double, 61>::integrate(xf, lo, hi, 15, 1e-14);
    if (lo <= min) break;
  }
  double cost = 0;
  for (int i = 0;; ++i) {
    const double hi = max / std::pow(c, i);
    const double lo = std::max(max / std::pow(c, i + 1), min);
    const double count = gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
    const double moment = gauss_kronrod<double, 61>::integrate(xf, lo, hi, 15, 1e-14);
    if (count > 0) {
      const double rho = moment / total_moment;
      const double p = moment / (count * hi);
      cost += rho * (i + 1.0 / p);
    }
    if (lo <= min) break;
  }
  return cost;
}

double golden_section(double (*g)(double), double a, double b) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    }
  }
  return (a + b) / 2;
}

}  // namespace

TEST(RejectionCost, UniformTendsToTwo) {
  EXPECT_NEAR(rejection_cost({RateDistribution::Uniform, 1e-9, 1.0}).expected_attempts, 2.0, 1e-8);
  EXPECT_NEAR(rejection_cost({RateDistribution::Uniform, 1e-3, 1.0}).expected_attempts,
              2.0 / (1 + 1e-3), 1e-12);
}

TEST(RejectionCost, LogUniform) {
  const auto p = rejection_cost({RateDistribution::LogUniform, 1e-3, 1.0});
  EXPECT_NEAR(p.expected_attempts, std::log(1e3) / (1 - 1e-3), 1e-12);
  EXPECT_NEAR(p.expected_attempts, 6.915, 1e-3);
}

TEST(RejectionCost, Degenerate) {
  const auto p = rejection_cost({RateDistribution::Uniform, 0.3, 0.3});
  EXPECT_EQ(p.p_accept, 1.0);
  EXPECT_EQ(p.expected_attempts, 1.0);
}

TEST(CrCost, Depth) {
  EXPECT_EQ(depth({RateDistribution::Uniform, 1e-3, 1.0}, 10.0), 3u);
  EXPECT_EQ(depth({RateDistribution::LogUniform, 1e-3, 1.0}, 2.0), 9u);
}

TEST(CrCost, LogUniformEqualCountPerBand) {
  // max/min = 2^10 with c = 2: ten full bands of equal outcome mass.
  const auto p = cr_cost({RateDistribution::LogUniform, std::ldexp(1.0, -10), 1.0}, 2.0);
  ASSERT_EQ(p.depth_d, 10u);
  for (const auto& band : p.bands) {
    if (band.index < 10) EXPECT_NEAR(band.count_mass, 0.1, 1e-12);
    else EXPECT_NEAR(band.count_mass, 0.0, 1e-12);
  }
}

TEST(CrCost, MassesSumToOne) {
  for (auto kind : {RateDistribution::Uniform, RateDistribution::LogUniform}) {
    for (double c : {1.5, 2.0, std::numbers::e, 3.5, 5.0, 10.0}) {
      const auto p = cr_cost({kind, 1e-3, 1.0}, c);
      double mass = 0, count = 0;
      for (const auto& band : p.bands) {
        mass += band.mass;
        count += band.count_mass;
        if (band.mass > 0) {
          EXPECT_GT(band.acceptance, 1.0 / c - 1e-12);
          EXPECT_LE(band.acceptance, 1.0 + 1e-12);
        }
      }
      EXPECT_NEAR(mass, 1.0, 1e-12);
      EXPECT_NEAR(count, 1.0, 1e-12);
    }
  }
}

TEST(CrCost, ClosedFormMatchesSum) {
  for (auto kind : {RateDistribution::Uniform, RateDistribution::LogUniform}) {
    for (double ratio : {1e-1, 1e-3, 1e-6, 0.3}) {
      for (double c : {1.5, 2.0, std::numbers::e, 3.5, 5.0, 10.0}) {
        const auto p = cr_cost({kind, ratio, 1.0}, c);
        EXPECT_NEAR(p.closed_form_total, p.expected_total, 1e-9 * p.expected_total)
            << to_string(kind) << " ratio " << ratio << " c " << c;
      }
    }
  }
}

TEST(CrCost, MatchesQuadratureOracle) {
  for (auto kind : {RateDistribution::Uniform, RateDistribution::LogUniform}) {
    for (double c : {2.0, std::numbers::e, 4.0}) {
      const double expected = quadrature_cr_cost(kind, 1e-3, c);
      EXPECT_NEAR(cr_cost({kind, 1e-3, 1.0}, c).expected_total, expected, 1e-8 * expected);
    }
  }
}

TEST(CrCost, InvalidConstant) {
  EXPECT_THROW(cr_cost({RateDistribution::Uniform, 1e-3, 1.0}, 1.0), std::invalid_argument);
}

TEST(OptimalC, GoldenSectionAgrees) {
  EXPECT_EQ(optimal_c({RateDistribution::Uniform, 1e-3, 1.0}), std::numbers::e);
  EXPECT_FALSE(optimal_c({RateDistribution::LogUniform, 1e-3, 1.0}).has_value());
  const double argmin = golden_section([](double c) { return c / std::log(c); }, 1.0001, 10.0);
  EXPECT_NEAR(argmin, *optimal_c({RateDistribution::Uniform, 1e-3, 1.0}), 1e-6);
}

TEST(OptimalC, GridMinimumAtE) {
  const DistributionSpec spec{RateDistribution::Uniform, 1e-3, 1.0};
  const double grid[] = {1.5, 2.0, std::numbers::e, 3.5, 5.0};
  double best_exact = INFINITY, best_growth = INFINITY, at_exact = 0, at_growth = 0;
  for (double c : grid) {
    const auto p = cr_cost(spec, c);
    if (p.expected_total < best_exact) best_exact = p.expected_total, at_exact = c;
    if (p.growth_model < best_growth) best_growth = p.growth_model, at_growth = c;
  }
  EXPECT_EQ(at_exact, std::numbers::e);
  EXPECT_EQ(at_growth, std::numbers::e);
}
