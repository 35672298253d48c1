#include "dynsample/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dynsample/cr_sampler.hpp"

namespace dynsample::analytics {

namespace {

void check_group_constant(double c) {
  if (!std::isfinite(c) || c <= 1.0) {
    throw std::invalid_argument("group constant must be > 1, got " + std::to_string(c));
  }
}

}  // namespace

CostPrediction rejection_cost(const DistributionSpec& spec) {
  validate(spec);
  CostPrediction out;
  const double r = spec.ratio();
  if (spec.min == spec.max) {
    out.p_accept = 1.0;
  } else if (spec.kind == RateDistribution::Uniform) {
    const double mx = spec.max;
    const double mn = spec.min;
    out.p_accept = (mx * mx - mn * mn) / (2.0 * (mx * mx - mx * mn));
  } else {
    out.p_accept = (1.0 - r) / std::log(1.0 / r);
  }
  out.expected_attempts = 1.0 / out.p_accept;
  out.expected_select = 0.0;
  out.expected_total = out.expected_attempts;
  out.closed_form_total = out.expected_total;
  out.growth_model =
      spec.kind == RateDistribution::Uniform ? 2.0 : std::log(spec.max / spec.min);
  out.bands.push_back({0, spec.min, spec.max, 1.0, 1.0, out.p_accept});
  return out;
}

std::size_t depth(const DistributionSpec& spec, double c) {
  validate(spec);
  check_group_constant(c);
  return band_index(spec.min, spec.max, c);
}

CostPrediction cr_cost(const DistributionSpec& spec, double c) {
  const std::size_t d = depth(spec, c);
  CostPrediction out;
  out.depth_d = d;

  if (spec.min == spec.max) {
    out.bands.push_back({0, spec.min, spec.max, 1.0, 1.0, 1.0});
  } else {
    const double total_moment = mean(spec);
    for (std::size_t i = 0; i <= d; ++i) {
      BandCost band;
      band.index = i;
      band.upper = band_ceiling(spec.max, c, i);
      band.lower = std::max(band_ceiling(spec.max, c, i + 1), spec.min);
      band.count_mass = cdf(spec, band.upper) - cdf(spec, band.lower);
      const double moment = partial_first_moment(spec, band.lower, band.upper);
      band.mass = moment / total_moment;
      if (band.count_mass > 0.0) band.acceptance = moment / (band.count_mass * band.upper);
      out.bands.push_back(band);
    }
  }

  double select = 0.0;
  double attempts = 0.0;
  for (const BandCost& band : out.bands) {
    if (band.mass <= 0.0) continue;
    select += band.mass * static_cast<double>(band.index);
    attempts += band.mass / band.acceptance;
  }
  out.expected_select = select;
  out.expected_attempts = attempts;
  out.p_accept = 1.0 / attempts;
  out.expected_total = select + attempts;
  out.closed_form_total = cr_closed_form(spec, c);
  out.growth_model = cr_growth_model(spec, c);
  return out;
}

namespace {

// sum_{i=0}^{d-1} i q^i
double weighted_geometric(double q, double d) {
  if (d < 1.0) return 0.0;
  return q * (1.0 - d * std::pow(q, d - 1.0) + (d - 1.0) * std::pow(q, d)) / ((1.0 - q) * (1.0 - q));
}

}  // namespace

double cr_closed_form(const DistributionSpec& spec, double c) {
  const std::size_t depth_d = depth(spec, c);
  if (spec.min == spec.max) return 1.0;
  const double d = static_cast<double>(depth_d);
  const double r = spec.ratio();
  const double x = 1.0 / c;
  const double xd = std::pow(x, d);

  if (spec.kind == RateDistribution::Uniform) {
    // Full band i holds rate share x^(2i) (1 - x^2) / (1 - r^2) and needs
    // 2c/(c+1) trials; the last band (r, x^d] needs 2 x^d / (x^d + r).
    const double y = x * x;
    const double yd = xd * xd;
    const double full_select = (1.0 - y) * weighted_geometric(y, d);
    const double full_attempts = (1.0 - yd) * 2.0 * c / (c + 1.0);
    const double last = (yd - r * r) * d + 2.0 * xd * (xd - r);
    return (full_select + full_attempts + last) / (1.0 - r * r);
  }

  // Log-uniform: full band i holds rate share x^i (1 - x) / (1 - r) and needs
  // c ln(c)/(c-1) trials; the last band spans L - d ln(c) in log space.
  const double big_l = std::log(1.0 / r);
  const double lc = std::log(c);
  const double full_select = (1.0 - x) * weighted_geometric(x, d);
  const double full_attempts = lc * (1.0 - xd) / (1.0 - x);
  const double last = d * (xd - r) + xd * std::max(0.0, big_l - d * lc);
  return (full_select + full_attempts + last) / (1.0 - r);
}

double cr_growth_model(const DistributionSpec& spec, double c) {
  validate(spec);
  check_group_constant(c);
  const double big_l = std::log(spec.max / spec.min);
  const double lc = std::log(c);
  if (spec.kind == RateDistribution::Uniform) {
    return c / lc * big_l * (spec.max / spec.min);
  }
  return c / (c - 1.0) * big_l + big_l / (2.0 * lc) + big_l * big_l / (2.0 * lc * lc);
}

std::optional<double> optimal_c(const DistributionSpec& spec) {
  validate(spec);
  if (spec.kind == RateDistribution::Uniform) return std::numbers::e;
  return std::nullopt;
}

}  // namespace dynsample::analytics
