#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynsample/handle_table.hpp"
#include "dynsample/sampler.hpp"

namespace dynsample {

// Static array of cumulative rates: entry i holds r_0 + ... + r_i.
// Selection is a binary search for the first entry strictly greater than
// the draw, so zero-rate outcomes are never chosen for draws in [0, total).
class CumulativeArray {
 public:
  void rebuild(std::span<const double> rates);

  std::size_t select(double draw) const;

  std::span<const double> entries() const { return cumulative_; }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  bool empty() const { return cumulative_.empty(); }

 private:
  std::vector<double> cumulative_;
};

// Reference sampler: rebuilds the cumulative array after every mutation.
// O(N) updates, exact O(log N) selection. Intended for tests and as the
// small-N baseline.
class OracleSampler {
 public:
  OracleSampler() = default;

  OutcomeHandle add(Payload payload, double rate);
  void update(OutcomeHandle h, double rate);
  void erase(OutcomeHandle h);

  Selection extract(RandomSource& rng);
  Selection extract(RandomSource& rng, ExtractStats& stats);
  Selection select(double draw) const;

  double total_rate() const { return cumulative_.total(); }
  std::size_t size() const { return positive_; }
  std::size_t entry_count() const { return rates_.size(); }
  const CumulativeArray& cumulative() const { return cumulative_; }

  bool contains(OutcomeHandle h) const { return handles_.valid(h); }
  double rate(OutcomeHandle h) const { return rates_[handles_.location(h).position]; }
  Payload payload(OutcomeHandle h) const { return handles_.payload(h); }
  // Index of h in the cumulative array.
  std::size_t position(OutcomeHandle h) const { return handles_.location(h).position; }

  std::string check_invariants(double rel_tol = 1e-12) const;

 private:
  void rebuild();
  Selection at(std::size_t index) const;

  std::vector<double> rates_;
  std::vector<std::uint32_t> slots_;
  CumulativeArray cumulative_;
  HandleTable handles_;
  std::size_t positive_ = 0;
};

static_assert(WeightedSampler<OracleSampler>);

}  // namespace dynsample
