#include "dynsample/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynsample {

std::string_view to_string(RateDistribution kind) {
  return kind == RateDistribution::Uniform ? "uniform" : "loguniform";
}

std::optional<RateDistribution> parse_distribution(std::string_view name) {
  if (name == "uniform") return RateDistribution::Uniform;
  if (name == "loguniform" || name == "log-uniform") return RateDistribution::LogUniform;
  return std::nullopt;
}

void validate(const DistributionSpec& spec) {
  if (!(spec.min > 0.0) || !std::isfinite(spec.max) || spec.max < spec.min) {
    throw std::invalid_argument("distribution needs 0 < min <= max < inf, got [" +
                                std::to_string(spec.min) + ", " + std::to_string(spec.max) + "]");
  }
}

double sample_rate(const DistributionSpec& spec, RandomSource& rng) {
  const double u = rng.uniform();
  double x;
  if (spec.kind == RateDistribution::Uniform) {
    x = spec.min + u * (spec.max - spec.min);
  } else {
    x = std::exp(std::log(spec.min) + u * std::log(spec.max / spec.min));
  }
  return std::clamp(x, spec.min, spec.max);
}

double pdf(const DistributionSpec& spec, double x) {
  if (x < spec.min || x > spec.max) return 0.0;
  if (spec.min == spec.max) return std::numeric_limits<double>::infinity();
  if (spec.kind == RateDistribution::Uniform) return 1.0 / (spec.max - spec.min);
  return 1.0 / (x * std::log(spec.max / spec.min));
}

double cdf(const DistributionSpec& spec, double x) {
  if (x < spec.min) return 0.0;
  if (x >= spec.max) return 1.0;
  if (spec.kind == RateDistribution::Uniform) return (x - spec.min) / (spec.max - spec.min);
  return std::log(x / spec.min) / std::log(spec.max / spec.min);
}

double partial_first_moment(const DistributionSpec& spec, double lo, double hi) {
  if (spec.min == spec.max) return (lo < spec.min && spec.min <= hi) ? spec.min : 0.0;
  lo = std::max(lo, spec.min);
  hi = std::min(hi, spec.max);
  if (hi <= lo) return 0.0;
  if (spec.kind == RateDistribution::Uniform) {
    return (hi * hi - lo * lo) / (2.0 * (spec.max - spec.min));
  }
  return (hi - lo) / std::log(spec.max / spec.min);
}

double mean(const DistributionSpec& spec) {
  if (spec.min == spec.max) return spec.min;
  return partial_first_moment(spec, spec.min, spec.max);
}

}  // namespace dynsample
