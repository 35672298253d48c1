#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynsample/handle_table.hpp"
#include "dynsample/sampler.hpp"

namespace dynsample {

// Nearly complete binary tree with outcomes as leaves. Internal nodes cache
// the rate sum and leaf count of their subtree, giving O(log N) extraction
// and update. The tree always has the shape of an implicit binary heap with
// 2N-1 nodes: every internal node has two children, leaves sit on the last
// two levels, and the deepest level is packed to the left.
//
// Zero-rate leaves stay in the tree until erased; they are never selected.
class TreeSampler {
 public:
  static constexpr std::uint32_t kNone = HandleTable::kNowhere;

  struct Node {
    double rate = 0.0;
    std::uint32_t weight = 0;
    std::uint32_t parent = kNone;
    std::uint32_t left = kNone;
    std::uint32_t right = kNone;
    std::uint32_t slot = kNone;  // handle slot, leaves only
    bool leaf = false;
    bool queued = false;
  };

  TreeSampler() = default;

  // Linear-time bulk construction. Handles are returned in input order.
  static std::pair<TreeSampler, std::vector<OutcomeHandle>> build(
      std::span<const WeightedOutcome> outcomes);

  OutcomeHandle add(Payload payload, double rate);
  void update(OutcomeHandle h, double rate);
  // Batch update: all leaves are rewritten first, then every affected
  // ancestor is recomputed once per pass of the touched list.
  void update_leaves(std::span<const std::pair<OutcomeHandle, double>> changes);
  void erase(OutcomeHandle h);

  Selection extract(RandomSource& rng);
  Selection extract(RandomSource& rng, ExtractStats& stats);

  // Descent with an explicit draw in [0, total_rate()).
  Selection select(double draw) const;

  double total_rate() const { return total_rate_; }
  std::size_t size() const { return positive_; }
  std::size_t leaf_count() const { return leaves_; }
  std::size_t node_count() const { return nodes_.size() - free_nodes_.size(); }
  bool empty() const { return leaves_ == 0; }

  bool contains(OutcomeHandle h) const { return handles_.valid(h); }
  double rate(OutcomeHandle h) const { return nodes_[handles_.location(h).position].rate; }
  Payload payload(OutcomeHandle h) const { return handles_.payload(h); }
  std::size_t depth(OutcomeHandle h) const;
  std::size_t max_depth() const;

  // Nodes recomputed by the most recent touched-list pass.
  std::size_t last_update_visits() const { return last_update_visits_; }

  // Full-scan consistency check: links, sums, weights, heap shape, lastLeaf,
  // handle bijection. Returns an empty string when everything holds.
  std::string check_invariants(double rel_tol = 1e-9) const;

 private:
  std::uint32_t new_node();
  void free_node(std::uint32_t n);
  void replace_child(std::uint32_t parent, std::uint32_t old_child, std::uint32_t new_child);
  void touch(std::uint32_t n);
  void update_tree();
  std::uint32_t find_insertion_leaf() const;
  std::uint32_t find_last_leaf() const;
  void set_leaf_rate(std::uint32_t n, double rate);

  template <bool Count>
  Selection extract_impl(RandomSource& rng, ExtractStats* stats);
  std::uint32_t descend(double draw, std::uint64_t* visits) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_nodes_;
  std::vector<std::uint32_t> touched_;
  HandleTable handles_;
  std::uint32_t root_ = kNone;
  std::uint32_t last_leaf_ = kNone;
  std::size_t leaves_ = 0;
  std::size_t positive_ = 0;
  double total_rate_ = 0.0;
  std::size_t last_update_visits_ = 0;
};

static_assert(WeightedSampler<TreeSampler>);

}  // namespace dynsample
