#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dynsample/compensated_sum.hpp"
#include "dynsample/handle_table.hpp"
#include "dynsample/sampler.hpp"

namespace dynsample {

// Upper edge of band i: max / c^i.
inline double band_ceiling(double max_rate, double c, std::size_t i) {
  return max_rate / std::pow(c, static_cast<double>(i));
}

// The i with max/c^(i+1) < rate <= max/c^i. The logarithm gives a first
// guess; the band predicate decides, so exact band edges land consistently.
std::size_t band_index(double rate, double max_rate, double c);

struct CrOptions {
  std::uint64_t attempt_cap = 10'000'000;
};

// Composition-rejection: outcomes are bucketed into geometric rate bands
// (max/c^(i+1), max/c^i]. Extraction scans the bands in order, picking one
// with probability proportional to its rate sum, then runs rejection
// sampling inside it against the band ceiling, which needs fewer than c
// trials on average. add/update/erase are O(1).
class CrSampler {
 public:
  struct Entry {
    double rate = 0.0;
    std::uint32_t slot = 0;
  };

  class Group {
   public:
    double ceiling() const { return ceiling_; }
    double sum_rate() const { return sum_.value(); }
    std::span<const Entry> entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

   private:
    friend class CrSampler;
    std::vector<Entry> entries_;
    CompensatedSum sum_;
    double ceiling_ = 0.0;
  };

  explicit CrSampler(double max_rate, double c = std::numbers::e, CrOptions options = {});

  OutcomeHandle add(Payload payload, double rate);
  void update(OutcomeHandle h, double rate);
  void erase(OutcomeHandle h);

  Selection extract(RandomSource& rng);
  Selection extract(RandomSource& rng, ExtractStats& stats);
  // In-group rejection only, skipping the composition step.
  Selection extract_from_group(std::size_t group, RandomSource& rng, ExtractStats& stats);

  // Recompute every group sum and the total from scratch.
  void rebuild_sums();

  double total_rate() const;
  std::size_t size() const { return size_; }
  double max_rate() const { return max_rate_; }
  double group_constant() const { return c_; }
  std::size_t group_count() const { return groups_.size(); }
  std::size_t nonempty_group_count() const;
  const Group& group(std::size_t i) const { return groups_.at(i); }
  std::size_t group_index(double rate) const { return band_index(rate, max_rate_, c_); }

  bool contains(OutcomeHandle h) const { return handles_.valid(h); }
  double rate(OutcomeHandle h) const;
  Payload payload(OutcomeHandle h) const { return handles_.payload(h); }
  // Group holding h; only meaningful while rate(h) > 0.
  std::size_t group_of(OutcomeHandle h) const { return handles_.location(h).group; }

  std::string check_invariants(double rel_tol = 1e-9) const;

 private:
  void check_rate(double rate) const;
  void insert(std::uint32_t slot, double rate);
  void remove(std::uint32_t slot);

  template <bool Count>
  Selection extract_impl(RandomSource& rng, ExtractStats* stats);
  template <bool Count>
  Selection extract_in(std::size_t group, RandomSource& rng, ExtractStats* stats);

  double max_rate_;
  double c_;
  CrOptions options_;
  std::vector<Group> groups_;
  HandleTable handles_;
  CompensatedSum total_;
  std::size_t size_ = 0;
};

static_assert(WeightedSampler<CrSampler>);

}  // namespace dynsample
