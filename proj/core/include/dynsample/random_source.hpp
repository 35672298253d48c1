#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace dynsample {

__extension__ using uint128 = unsigned __int128;

// Seedable 64-bit Mersenne Twister with portable conversions to doubles and
// bounded integers, so a seed pins the whole draw sequence on any platform.
class RandomSource {
 public:
  static constexpr std::string_view kName = "mt19937_64";

  explicit RandomSource(std::uint64_t seed = 5489u) : engine_(seed) {}

  void seed(std::uint64_t s) { engine_.seed(s); }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, bound). Rounding can push the product up to bound itself
  // for some bounds; that case is folded back below bound.
  double uniform(double bound) {
    const double x = uniform() * bound;
    return x < bound ? x : std::nextafter(bound, 0.0);
  }

  // Uniform integer on [0, bound), bound > 0 (Lemire's multiply-shift with
  // rejection of the biased low region).
  std::uint64_t below(std::uint64_t bound) {
    uint128 m = static_cast<uint128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = static_cast<uint128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dynsample
