#pragma once

#include <cmath>

namespace dynsample {

// Neumaier's variant of Kahan summation for running totals that see many
// additions and subtractions.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void subtract(double x) { add(-x); }
  void reset() { sum_ = compensation_ = 0.0; }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace dynsample
