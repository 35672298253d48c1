#pragma once

#include <cmath>
#include <cstdint>

namespace dynsample::harness {

// Running mean and sum of squared deviations (Welford 1962).
struct WelfordAccumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  // Sample variance; zero until two values have been seen.
  double variance() const { return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1); }
  double stddev() const { return std::sqrt(variance()); }
};

inline WelfordAccumulator welford_push(WelfordAccumulator acc, double x) {
  acc.push(x);
  return acc;
}

}  // namespace dynsample::harness
