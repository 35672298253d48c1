#include "dynsample/cr_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynsample {

std::size_t band_index(double rate, double max_rate, double c) {
  validate_rate(rate);
  if (rate == 0.0) throw InvalidRate(rate);
  if (rate > max_rate) throw RateExceedsMax(rate, max_rate);

  const double guess = std::floor(std::log(max_rate / rate) / std::log(c));
  std::size_t i = guess > 0.0 ? static_cast<std::size_t>(guess) : 0;
  while (i > 0 && rate > band_ceiling(max_rate, c, i)) --i;
  while (rate <= band_ceiling(max_rate, c, i + 1)) ++i;
  return i;
}

CrSampler::CrSampler(double max_rate, double c, CrOptions options)
    : max_rate_(max_rate), c_(c), options_(options) {
  if (!std::isfinite(max_rate) || max_rate <= 0.0) throw InvalidRate(max_rate);
  if (!std::isfinite(c) || c <= 1.0) {
    throw SamplerError("group constant must be finite and > 1, got " + std::to_string(c));
  }
}

void CrSampler::check_rate(double rate) const {
  validate_rate(rate);
  if (rate > max_rate_) throw RateExceedsMax(rate, max_rate_);
}

void CrSampler::insert(std::uint32_t slot, double rate) {
  const std::size_t i = band_index(rate, max_rate_, c_);
  while (groups_.size() <= i) {
    Group g;
    g.ceiling_ = band_ceiling(max_rate_, c_, groups_.size());
    groups_.push_back(std::move(g));
  }
  Group& g = groups_[i];
  auto& where = handles_.location_of_slot(slot);
  where.position = static_cast<std::uint32_t>(g.entries_.size());
  where.group = static_cast<std::uint32_t>(i);
  g.entries_.push_back({rate, slot});
  g.sum_.add(rate);
  total_.add(rate);
  ++size_;
}

void CrSampler::remove(std::uint32_t slot) {
  auto& where = handles_.location_of_slot(slot);
  Group& g = groups_[where.group];
  const std::uint32_t pos = where.position;
  const double rate = g.entries_[pos].rate;
  where.position = HandleTable::kNowhere;

  const auto last = static_cast<std::uint32_t>(g.entries_.size() - 1);
  if (pos != last) {
    g.entries_[pos] = g.entries_[last];
    handles_.location_of_slot(g.entries_[pos].slot).position = pos;
  }
  g.entries_.pop_back();
  // An empty group must read exactly zero or the scan could select it.
  if (g.entries_.empty()) {
    g.sum_.reset();
  } else {
    g.sum_.subtract(rate);
  }
  --size_;
  if (size_ == 0) {
    total_.reset();
  } else {
    total_.subtract(rate);
  }
}

OutcomeHandle CrSampler::add(Payload payload, double rate) {
  check_rate(rate);
  const OutcomeHandle h = handles_.issue(payload);
  if (rate > 0.0) insert(h.slot, rate);
  return h;
}

void CrSampler::update(OutcomeHandle h, double rate) {
  const HandleTable::Location where = handles_.location(h);
  check_rate(rate);
  if (where.position == HandleTable::kNowhere) {
    if (rate > 0.0) insert(h.slot, rate);
    return;
  }
  if (rate == 0.0) {
    remove(h.slot);
    return;
  }
  Group& g = groups_[where.group];
  const bool same_band = rate <= g.ceiling_ && rate > band_ceiling(max_rate_, c_, where.group + 1);
  if (same_band) {
    Entry& e = g.entries_[where.position];
    g.sum_.add(rate - e.rate);
    total_.add(rate - e.rate);
    e.rate = rate;
  } else {
    remove(h.slot);
    insert(h.slot, rate);
  }
}

void CrSampler::erase(OutcomeHandle h) {
  if (handles_.location(h).position != HandleTable::kNowhere) remove(h.slot);
  handles_.retire(h);
}

double CrSampler::rate(OutcomeHandle h) const {
  const HandleTable::Location& where = handles_.location(h);
  if (where.position == HandleTable::kNowhere) return 0.0;
  return groups_[where.group].entries_[where.position].rate;
}

double CrSampler::total_rate() const { return std::max(0.0, total_.value()); }

std::size_t CrSampler::nonempty_group_count() const {
  return static_cast<std::size_t>(
      std::count_if(groups_.begin(), groups_.end(), [](const Group& g) { return !g.empty(); }));
}

void CrSampler::rebuild_sums() {
  total_.reset();
  for (Group& g : groups_) {
    g.sum_.reset();
    for (const Entry& e : g.entries_) g.sum_.add(e.rate);
    total_.add(g.sum_.value());
  }
}

template <bool Count>
Selection CrSampler::extract_in(std::size_t group, RandomSource& rng, ExtractStats* stats) {
  const Group& g = groups_[group];
  const std::size_t n = g.entries_.size();
  if (n == 0) throw EmptyStructure();
  for (std::uint64_t attempt = 1; attempt <= options_.attempt_cap; ++attempt) {
    const Entry& e = g.entries_[rng.below(n)];
    if (e.rate >= rng.uniform(g.ceiling_)) {
      if constexpr (Count) stats->attempts += attempt;
      return {handles_.handle_of_slot(e.slot), handles_.payload_of_slot(e.slot)};
    }
  }
  throw AttemptLimitExceeded(options_.attempt_cap);
}

template <bool Count>
Selection CrSampler::extract_impl(RandomSource& rng, ExtractStats* stats) {
  if (size_ == 0) throw EmptyStructure();
  double draw = rng.uniform(total_rate());
  std::size_t chosen = groups_.size();
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const double s = groups_[i].sum_.value();
    if (s > draw) {
      chosen = i;
      break;
    }
    draw -= s;
  }
  if (chosen == groups_.size()) {
    // Rounding left the draw past the last sum: take the last nonempty group.
    chosen = groups_.size() - 1;
    while (groups_[chosen].empty()) --chosen;
  }
  if constexpr (Count) {
    stats->scan_steps += chosen;
    ++stats->extractions;
  }
  return extract_in<Count>(chosen, rng, stats);
}

Selection CrSampler::extract(RandomSource& rng) { return extract_impl<false>(rng, nullptr); }

Selection CrSampler::extract(RandomSource& rng, ExtractStats& stats) {
  return extract_impl<true>(rng, &stats);
}

Selection CrSampler::extract_from_group(std::size_t group, RandomSource& rng, ExtractStats& stats) {
  if (group >= groups_.size()) throw EmptyStructure();
  ++stats.extractions;
  return extract_in<true>(group, rng, &stats);
}

std::string CrSampler::check_invariants(double rel_tol) const {
  std::ostringstream err;
  auto close = [rel_tol](double a, double b) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
  };

  std::size_t members = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const Group& g = groups_[i];
    if (g.ceiling_ != band_ceiling(max_rate_, c_, i)) {
      err << "group " << i << " has the wrong ceiling";
      return err.str();
    }
    const double floor = band_ceiling(max_rate_, c_, i + 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < g.entries_.size(); ++k) {
      const Entry& e = g.entries_[k];
      if (!(e.rate > floor && e.rate <= g.ceiling_)) {
        err << "rate " << e.rate << " outside band " << i << " (" << floor << ", " << g.ceiling_
            << "]";
        return err.str();
      }
      if (!handles_.slot_live(e.slot)) return "entry bound to a retired handle";
      const auto& where = handles_.location_of_slot(e.slot);
      if (where.group != i || where.position != k) {
        err << "entry " << k << " of group " << i << " has a stale location";
        return err.str();
      }
      sum += e.rate;
    }
    if (g.entries_.empty() ? g.sum_rate() != 0.0 : !close(g.sum_rate(), sum)) {
      err << "group " << i << " sum " << g.sum_rate() << " vs " << sum;
      return err.str();
    }
    members += g.entries_.size();
    total += sum;
  }
  if (members != size_) return "size does not match group membership";

  std::size_t parked = 0;
  for (std::uint32_t s = 0; s < handles_.slot_count(); ++s) {
    if (handles_.slot_live(s) && handles_.location_of_slot(s).position == HandleTable::kNowhere) {
      ++parked;
    }
  }
  if (parked + size_ != handles_.live_count()) return "handle table is not a bijection";
  if (size_ == 0 ? total_rate() != 0.0 : !close(total_rate(), total)) {
    err << "total rate " << total_rate() << " vs " << total;
    return err.str();
  }
  return {};
}

}  // namespace dynsample
