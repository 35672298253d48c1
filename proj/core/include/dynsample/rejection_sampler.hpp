#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynsample/compensated_sum.hpp"
#include "dynsample/handle_table.hpp"
#include "dynsample/sampler.hpp"

namespace dynsample {

struct RejectionOptions {
  // Trials allowed per extract() before AttemptLimitExceeded.
  std::uint64_t attempt_cap = 10'000'000;
  // Derive index and acceptance threshold from one uniform draw (integer and
  // fractional part of u*N). Cheaper, but the threshold loses log2(N) bits.
  bool single_draw = false;
};

// Dense array of live outcomes. Extraction picks a uniform index and
// accepts it with probability rate / max_rate, so its cost depends only on
// the rate distribution, not on N. add/update/erase are O(1); erase
// overwrites the victim with the last entry.
//
// Outcomes whose rate drops to zero leave the array but keep their handle;
// raising the rate again puts them back.
class RejectionSampler {
 public:
  struct Entry {
    double rate = 0.0;
    std::uint32_t slot = 0;
  };

  explicit RejectionSampler(double max_rate, RejectionOptions options = {});

  OutcomeHandle add(Payload payload, double rate);
  void update(OutcomeHandle h, double rate);
  void erase(OutcomeHandle h);

  Selection extract(RandomSource& rng);
  Selection extract(RandomSource& rng, ExtractStats& stats);

  double total_rate() const;
  std::size_t size() const { return entries_.size(); }
  double max_rate() const { return max_rate_; }
  const RejectionOptions& options() const { return options_; }
  const std::vector<Entry>& entries() const { return entries_; }

  bool contains(OutcomeHandle h) const { return handles_.valid(h); }
  double rate(OutcomeHandle h) const;
  Payload payload(OutcomeHandle h) const { return handles_.payload(h); }
  // Current array position, or HandleTable::kNowhere for a zero-rate outcome.
  std::uint32_t position(OutcomeHandle h) const { return handles_.location(h).position; }

  std::string check_invariants(double rel_tol = 1e-9) const;

 private:
  void check_rate(double rate) const;
  void append(std::uint32_t slot, double rate);
  void remove_at(std::uint32_t pos);

  template <bool Count>
  Selection extract_impl(RandomSource& rng, ExtractStats* stats);

  double max_rate_;
  RejectionOptions options_;
  std::vector<Entry> entries_;
  HandleTable handles_;
  CompensatedSum total_;
};

static_assert(WeightedSampler<RejectionSampler>);

}  // namespace dynsample
