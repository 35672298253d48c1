#pragma once

#include <optional>
#include <string_view>

#include "dynsample/random_source.hpp"

namespace dynsample {

enum class RateDistribution { Uniform, LogUniform };

std::string_view to_string(RateDistribution kind);
std::optional<RateDistribution> parse_distribution(std::string_view name);

// Rate law on [min, max] with 0 < min <= max. min == max is the degenerate
// point mass (every rate at the ceiling).
struct DistributionSpec {
  RateDistribution kind = RateDistribution::Uniform;
  double min = 1e-3;
  double max = 1.0;

  double ratio() const { return min / max; }
};

// Throws std::invalid_argument unless 0 < min <= max < inf.
void validate(const DistributionSpec& spec);

double sample_rate(const DistributionSpec& spec, RandomSource& rng);

// Density; 0 outside [min, max]. The degenerate spec has no density and
// reports +inf at x == min.
double pdf(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);

// Integral of x f(x) over (lo, hi], clipped to the support.
double partial_first_moment(const DistributionSpec& spec, double lo, double hi);
double mean(const DistributionSpec& spec);

}  // namespace dynsample
