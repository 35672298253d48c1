#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "dynsample/random_source.hpp"

namespace dynsample {

// Caller-supplied identifier, passed through untouched.
struct Payload {
  std::uint64_t value = 0;

  friend constexpr bool operator==(Payload, Payload) = default;
  friend constexpr auto operator<=>(Payload, Payload) = default;
};

// Stable identity of an outcome from add() until delete. The generation
// distinguishes a recycled slot from the outcome that previously owned it.
struct OutcomeHandle {
  std::uint32_t slot = 0;
  std::uint32_t generation = 0;

  friend constexpr bool operator==(OutcomeHandle, OutcomeHandle) = default;
};

struct WeightedOutcome {
  Payload payload;
  double rate = 0.0;
};

struct Selection {
  OutcomeHandle handle;
  Payload payload;
};

// Diagnostic counters filled by the counting overload of extract().
// scan_steps is the number of groups passed over before the selected one
// (composition-rejection only); attempts counts rejection trials;
// node_visits counts nodes touched by a tree descent.
struct ExtractStats {
  std::uint64_t extractions = 0;
  std::uint64_t attempts = 0;
  std::uint64_t scan_steps = 0;
  std::uint64_t node_visits = 0;
};

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyStructure : public SamplerError {
 public:
  EmptyStructure() : SamplerError("extract on a structure with zero total rate") {}
};

class StaleHandle : public SamplerError {
 public:
  StaleHandle() : SamplerError("outcome handle is not live") {}
};

class RateExceedsMax : public SamplerError {
 public:
  RateExceedsMax(double rate, double max_rate)
      : SamplerError("rate " + std::to_string(rate) + " exceeds configured maximum " +
                     std::to_string(max_rate)) {}
};

class InvalidRate : public SamplerError {
 public:
  explicit InvalidRate(double rate)
      : SamplerError("rate must be finite and non-negative, got " + std::to_string(rate)) {}
};

class AttemptLimitExceeded : public SamplerError {
 public:
  explicit AttemptLimitExceeded(std::uint64_t cap)
      : SamplerError("rejection loop exceeded " + std::to_string(cap) + " attempts") {}
};

inline void validate_rate(double rate) {
  if (!std::isfinite(rate) || rate < 0.0) throw InvalidRate(rate);
}

// The operations every backend provides. Zero-rate policy differs between
// backends, but size() only counts selectable outcomes and extract() never
// yields a zero-rate outcome.
template <class S>
concept WeightedSampler = requires(S s, const S cs, Payload p, OutcomeHandle h, double r,
                                   RandomSource& rng, ExtractStats& stats) {
  { s.add(p, r) } -> std::same_as<OutcomeHandle>;
  { s.update(h, r) } -> std::same_as<void>;
  { s.erase(h) } -> std::same_as<void>;
  { s.extract(rng) } -> std::same_as<Selection>;
  { s.extract(rng, stats) } -> std::same_as<Selection>;
  { cs.total_rate() } -> std::convertible_to<double>;
  { cs.size() } -> std::convertible_to<std::size_t>;
  { cs.rate(h) } -> std::convertible_to<double>;
  { cs.payload(h) } -> std::same_as<Payload>;
  { cs.contains(h) } -> std::same_as<bool>;
};

}  // namespace dynsample
