#include "dynsample/oracle_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynsample {

void CumulativeArray::rebuild(std::span<const double> rates) {
  cumulative_.resize(rates.size());
  double running = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    running += rates[i];
    cumulative_[i] = running;
  }
}

std::size_t CumulativeArray::select(double draw) const {
  if (!(total() > 0.0)) throw EmptyStructure();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), draw);
  if (it != cumulative_.end()) return static_cast<std::size_t>(it - cumulative_.begin());
  // draw >= total cannot come from a half-open draw; map it to the last
  // positive-rate entry rather than a trailing zero.
  auto last = static_cast<std::size_t>(
      std::lower_bound(cumulative_.begin(), cumulative_.end(), total()) - cumulative_.begin());
  return last;
}

void OracleSampler::rebuild() {
  cumulative_.rebuild(rates_);
  positive_ = static_cast<std::size_t>(
      std::count_if(rates_.begin(), rates_.end(), [](double r) { return r > 0.0; }));
}

OutcomeHandle OracleSampler::add(Payload payload, double rate) {
  validate_rate(rate);
  const OutcomeHandle h =
      handles_.issue(payload, {static_cast<std::uint32_t>(rates_.size()), 0});
  rates_.push_back(rate);
  slots_.push_back(h.slot);
  rebuild();
  return h;
}

void OracleSampler::update(OutcomeHandle h, double rate) {
  const std::uint32_t pos = handles_.location(h).position;
  validate_rate(rate);
  rates_[pos] = rate;
  rebuild();
}

void OracleSampler::erase(OutcomeHandle h) {
  const std::uint32_t pos = handles_.location(h).position;
  handles_.retire(h);
  const std::size_t last = rates_.size() - 1;
  if (pos != last) {
    rates_[pos] = rates_[last];
    slots_[pos] = slots_[last];
    handles_.location_of_slot(slots_[pos]).position = pos;
  }
  rates_.pop_back();
  slots_.pop_back();
  rebuild();
}

Selection OracleSampler::at(std::size_t index) const {
  const std::uint32_t slot = slots_[index];
  return {handles_.handle_of_slot(slot), handles_.payload_of_slot(slot)};
}

Selection OracleSampler::select(double draw) const { return at(cumulative_.select(draw)); }

Selection OracleSampler::extract(RandomSource& rng) {
  if (!(total_rate() > 0.0)) throw EmptyStructure();
  return select(rng.uniform(total_rate()));
}

Selection OracleSampler::extract(RandomSource& rng, ExtractStats& stats) {
  Selection s = extract(rng);
  ++stats.extractions;
  return s;
}

std::string OracleSampler::check_invariants(double rel_tol) const {
  const auto entries = cumulative_.entries();
  if (entries.size() != rates_.size()) return "cumulative array out of date";
  if (!std::is_sorted(entries.begin(), entries.end())) return "cumulative array decreases";
  double sum = 0.0;
  double compensation = 0.0;
  for (double r : rates_) {
    const double y = r - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
  if (std::abs(total_rate() - sum) > rel_tol * sum) {
    std::ostringstream err;
    err << "total " << total_rate() << " vs compensated sum " << sum;
    return err.str();
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!handles_.slot_live(slots_[i]) || handles_.location_of_slot(slots_[i]).position != i) {
      return "handle table does not biject onto entries";
    }
  }
  if (handles_.live_count() != rates_.size()) return "live handle count mismatch";
  return {};
}

}  // namespace dynsample
