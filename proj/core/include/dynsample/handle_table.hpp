#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "dynsample/sampler.hpp"

namespace dynsample {

inline constexpr std::uint32_t kNowhere = std::numeric_limits<std::uint32_t>::max();

struct HandleLocation {
  std::uint32_t position = kNowhere;  // index in the owning container
  std::uint32_t group = 0;            // owning group, where a backend has several
};

// Maps stable handles to the current internal location of an outcome.
// Backends relocate entries freely and patch the location here.
class HandleTable {
 public:
  static constexpr std::uint32_t kNowhere = dynsample::kNowhere;
  using Location = HandleLocation;

  OutcomeHandle issue(Payload payload, Location where = {}) {
    std::uint32_t slot;
    if (free_.empty()) {
      slot = static_cast<std::uint32_t>(slots_.size());
      slots_.push_back({});
    } else {
      slot = free_.back();
      free_.pop_back();
    }
    Slot& s = slots_[slot];
    s.where = where;
    s.payload = payload;
    s.live = true;
    ++live_;
    return {slot, s.generation};
  }

  void retire(OutcomeHandle h) {
    Slot& s = checked(h);
    s.live = false;
    ++s.generation;
    s.where = {};
    free_.push_back(h.slot);
    --live_;
  }

  bool valid(OutcomeHandle h) const {
    return h.slot < slots_.size() && slots_[h.slot].live &&
           slots_[h.slot].generation == h.generation;
  }

  Location& location(OutcomeHandle h) { return checked(h).where; }
  const Location& location(OutcomeHandle h) const { return checked(h).where; }
  Payload payload(OutcomeHandle h) const { return checked(h).payload; }

  // Unchecked access by slot index, for entries that already know their slot.
  Location& location_of_slot(std::uint32_t slot) { return slots_[slot].where; }
  const Location& location_of_slot(std::uint32_t slot) const { return slots_[slot].where; }
  Payload payload_of_slot(std::uint32_t slot) const { return slots_[slot].payload; }
  OutcomeHandle handle_of_slot(std::uint32_t slot) const { return {slot, slots_[slot].generation}; }
  bool slot_live(std::uint32_t slot) const { return slot < slots_.size() && slots_[slot].live; }

  std::size_t live_count() const { return live_; }
  std::size_t slot_count() const { return slots_.size(); }

 private:
  struct Slot {
    Location where;
    Payload payload;
    std::uint32_t generation = 0;
    bool live = false;
  };

  Slot& checked(OutcomeHandle h) {
    if (!valid(h)) throw StaleHandle();
    return slots_[h.slot];
  }
  const Slot& checked(OutcomeHandle h) const {
    if (!valid(h)) throw StaleHandle();
    return slots_[h.slot];
  }

  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_;
  std::size_t live_ = 0;
};

}  // namespace dynsample
