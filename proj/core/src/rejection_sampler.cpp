#include "dynsample/rejection_sampler.hpp"

#include <algorithm>
#include <sstream>

namespace dynsample {

RejectionSampler::RejectionSampler(double max_rate, RejectionOptions options)
    : max_rate_(max_rate), options_(options) {
  if (!std::isfinite(max_rate) || max_rate <= 0.0) throw InvalidRate(max_rate);
}

void RejectionSampler::check_rate(double rate) const {
  validate_rate(rate);
  if (rate > max_rate_) throw RateExceedsMax(rate, max_rate_);
}

void RejectionSampler::append(std::uint32_t slot, double rate) {
  handles_.location_of_slot(slot).position = static_cast<std::uint32_t>(entries_.size());
  entries_.push_back({rate, slot});
  total_.add(rate);
}

void RejectionSampler::remove_at(std::uint32_t pos) {
  total_.subtract(entries_[pos].rate);
  handles_.location_of_slot(entries_[pos].slot).position = HandleTable::kNowhere;
  const std::uint32_t last = static_cast<std::uint32_t>(entries_.size() - 1);
  if (pos != last) {
    entries_[pos] = entries_[last];
    handles_.location_of_slot(entries_[pos].slot).position = pos;
  }
  entries_.pop_back();
  if (entries_.empty()) total_.reset();
}

OutcomeHandle RejectionSampler::add(Payload payload, double rate) {
  check_rate(rate);
  const OutcomeHandle h = handles_.issue(payload);
  if (rate > 0.0) append(h.slot, rate);
  return h;
}

void RejectionSampler::update(OutcomeHandle h, double rate) {
  const std::uint32_t pos = handles_.location(h).position;
  check_rate(rate);
  if (pos == HandleTable::kNowhere) {
    if (rate > 0.0) append(h.slot, rate);
  } else if (rate == 0.0) {
    remove_at(pos);
  } else {
    total_.add(rate - entries_[pos].rate);
    entries_[pos].rate = rate;
  }
}

void RejectionSampler::erase(OutcomeHandle h) {
  const std::uint32_t pos = handles_.location(h).position;
  if (pos != HandleTable::kNowhere) remove_at(pos);
  handles_.retire(h);
}

double RejectionSampler::rate(OutcomeHandle h) const {
  const std::uint32_t pos = handles_.location(h).position;
  return pos == HandleTable::kNowhere ? 0.0 : entries_[pos].rate;
}

double RejectionSampler::total_rate() const { return std::max(0.0, total_.value()); }

template <bool Count>
Selection RejectionSampler::extract_impl(RandomSource& rng, ExtractStats* stats) {
  const std::size_t n = entries_.size();
  if (n == 0) throw EmptyStructure();
  for (std::uint64_t attempt = 1; attempt <= options_.attempt_cap; ++attempt) {
    std::size_t idx;
    double threshold;
    if (options_.single_draw) {
      const double x = rng.uniform() * static_cast<double>(n);
      idx = std::min(static_cast<std::size_t>(x), n - 1);
      threshold = (x - static_cast<double>(idx)) * max_rate_;
    } else {
      idx = rng.below(n);
      threshold = rng.uniform(max_rate_);
    }
    const Entry& e = entries_[idx];
    if (e.rate >= threshold) {
      if constexpr (Count) {
        stats->attempts += attempt;
        ++stats->extractions;
      }
      return {handles_.handle_of_slot(e.slot), handles_.payload_of_slot(e.slot)};
    }
  }
  throw AttemptLimitExceeded(options_.attempt_cap);
}

Selection RejectionSampler::extract(RandomSource& rng) { return extract_impl<false>(rng, nullptr); }

Selection RejectionSampler::extract(RandomSource& rng, ExtractStats& stats) {
  return extract_impl<true>(rng, &stats);
}

std::string RejectionSampler::check_invariants(double rel_tol) const {
  std::ostringstream err;
  double sum = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Entry& e = entries_[k];
    if (!(e.rate > 0.0) || e.rate > max_rate_) {
      err << "entry " << k << " has rate " << e.rate << " outside (0, " << max_rate_ << "]";
      return err.str();
    }
    if (!handles_.slot_live(e.slot)) {
      err << "entry " << k << " bound to a retired handle";
      return err.str();
    }
    if (handles_.location_of_slot(e.slot).position != k) {
      err << "entry " << k << " has id " << handles_.location_of_slot(e.slot).position;
      return err.str();
    }
    sum += e.rate;
  }
  std::size_t parked = 0;
  for (std::uint32_t s = 0; s < handles_.slot_count(); ++s) {
    if (!handles_.slot_live(s)) continue;
    const std::uint32_t pos = handles_.location_of_slot(s).position;
    if (pos == HandleTable::kNowhere) {
      ++parked;
    } else if (pos >= entries_.size() || entries_[pos].slot != s) {
      err << "handle slot " << s << " points at position " << pos << " it does not own";
      return err.str();
    }
  }
  if (parked + entries_.size() != handles_.live_count()) return "handle table is not a bijection";
  if (std::abs(total_rate() - sum) > rel_tol * std::max(sum, total_rate())) {
    err << "total rate " << total_rate() << " drifted from " << sum;
    return err.str();
  }
  return {};
}

}  // namespace dynsample
