#include "dynsample/tree_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace dynsample {

namespace {

// Height of a nearly complete tree holding `weight` leaves.
int subtree_height(std::uint32_t weight) { return std::bit_width(weight - 1u); }

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::pair<TreeSampler, std::vector<OutcomeHandle>> TreeSampler::build(
    std::span<const WeightedOutcome> outcomes) {
  for (const auto& o : outcomes) validate_rate(o.rate);

  TreeSampler tree;
  std::vector<OutcomeHandle> handles;
  const std::size_t n = outcomes.size();
  if (n == 0) return {std::move(tree), std::move(handles)};

  handles.reserve(n);
  tree.nodes_.resize(2 * n - 1);
  auto& nodes = tree.nodes_;
  const std::uint32_t first_leaf = static_cast<std::uint32_t>(n - 1);

  for (std::uint32_t i = 0; i < first_leaf; ++i) {
    nodes[i].left = 2 * i + 1;
    nodes[i].right = 2 * i + 2;
    nodes[2 * i + 1].parent = i;
    nodes[2 * i + 2].parent = i;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::uint32_t>(first_leaf + k);
    Node& leaf = nodes[idx];
    leaf.leaf = true;
    leaf.rate = outcomes[k].rate;
    leaf.weight = 1;
    const OutcomeHandle h = tree.handles_.issue(outcomes[k].payload, {idx, 0});
    leaf.slot = h.slot;
    handles.push_back(h);
    if (leaf.rate > 0.0) ++tree.positive_;
  }
  // Children always have larger indices, so a reverse sweep is a post-order pass.
  for (std::uint32_t i = first_leaf; i-- > 0;) {
    Node& node = nodes[i];
    node.rate = nodes[node.left].rate + nodes[node.right].rate;
    node.weight = nodes[node.left].weight + nodes[node.right].weight;
  }

  tree.root_ = 0;
  tree.last_leaf_ = static_cast<std::uint32_t>(2 * n - 2);
  tree.leaves_ = n;
  tree.total_rate_ = nodes[0].rate;
  return {std::move(tree), std::move(handles)};
}

std::uint32_t TreeSampler::new_node() {
  if (!free_nodes_.empty()) {
    const std::uint32_t n = free_nodes_.back();
    free_nodes_.pop_back();
    nodes_[n] = Node{};
    return n;
  }
  nodes_.emplace_back();
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void TreeSampler::free_node(std::uint32_t n) {
  nodes_[n] = Node{};
  free_nodes_.push_back(n);
}

void TreeSampler::replace_child(std::uint32_t parent, std::uint32_t old_child,
                                std::uint32_t new_child) {
  if (parent == kNone) {
    root_ = new_child;
  } else if (nodes_[parent].left == old_child) {
    nodes_[parent].left = new_child;
  } else {
    nodes_[parent].right = new_child;
  }
  nodes_[new_child].parent = parent;
}

void TreeSampler::touch(std::uint32_t n) {
  if (nodes_[n].queued) return;
  nodes_[n].queued = true;
  touched_.push_back(n);
}

// A node may be processed more than once if one of its children is
// recomputed after it; the queued flag is cleared on processing so the
// parent is re-enqueued in that case.
void TreeSampler::update_tree() {
  std::size_t visits = 0;
  for (std::size_t head = 0; head < touched_.size(); ++head) {
    const std::uint32_t n = touched_[head];
    Node& node = nodes_[n];
    node.queued = false;
    ++visits;
    if (!node.leaf) {
      node.rate = nodes_[node.left].rate + nodes_[node.right].rate;
      node.weight = nodes_[node.left].weight + nodes_[node.right].weight;
    }
    if (n != root_) touch(node.parent);
  }
  touched_.clear();
  last_update_visits_ = visits;
  total_rate_ = root_ == kNone ? 0.0 : nodes_[root_].rate;
}

// Leaf that the next insertion splits: the leftmost leaf on the
// second-to-last level, or the leftmost leaf overall when the tree is perfect.
std::uint32_t TreeSampler::find_insertion_leaf() const {
  std::uint32_t n = root_;
  while (!nodes_[n].leaf) {
    const std::uint32_t wl = nodes_[nodes_[n].left].weight;
    const std::uint32_t wr = nodes_[nodes_[n].right].weight;
    if (wl == wr || !std::has_single_bit(wl)) {
      n = nodes_[n].left;
    } else {
      n = nodes_[n].right;
    }
  }
  return n;
}

// Rightmost leaf on the deepest level.
std::uint32_t TreeSampler::find_last_leaf() const {
  if (root_ == kNone) return kNone;
  std::uint32_t n = root_;
  while (!nodes_[n].leaf) {
    const std::uint32_t wl = nodes_[nodes_[n].left].weight;
    const std::uint32_t wr = nodes_[nodes_[n].right].weight;
    n = subtree_height(wr) == subtree_height(wl) ? nodes_[n].right : nodes_[n].left;
  }
  return n;
}

void TreeSampler::set_leaf_rate(std::uint32_t n, double rate) {
  Node& leaf = nodes_[n];
  if (leaf.rate > 0.0) --positive_;
  if (rate > 0.0) ++positive_;
  leaf.rate = rate;
}

OutcomeHandle TreeSampler::add(Payload payload, double rate) {
  validate_rate(rate);
  const std::uint32_t n = new_node();
  nodes_[n].leaf = true;
  nodes_[n].rate = rate;
  nodes_[n].weight = 1;
  const OutcomeHandle h = handles_.issue(payload, {n, 0});
  nodes_[n].slot = h.slot;
  ++leaves_;
  if (rate > 0.0) ++positive_;

  if (root_ == kNone) {
    root_ = n;
    last_leaf_ = n;
    total_rate_ = rate;
    last_update_visits_ = 0;
    return h;
  }

  const std::uint32_t target = find_insertion_leaf();
  const std::uint32_t joint = new_node();
  replace_child(nodes_[target].parent, target, joint);
  nodes_[joint].left = target;
  nodes_[joint].right = n;
  nodes_[target].parent = joint;
  nodes_[n].parent = joint;

  touch(n);
  update_tree();
  last_leaf_ = n;
  return h;
}

void TreeSampler::update(OutcomeHandle h, double rate) {
  const std::pair<OutcomeHandle, double> change{h, rate};
  update_leaves(std::span(&change, 1));
}

void TreeSampler::update_leaves(std::span<const std::pair<OutcomeHandle, double>> changes) {
  for (const auto& [h, rate] : changes) {
    if (!handles_.valid(h)) throw StaleHandle();
    validate_rate(rate);
  }
  for (const auto& [h, rate] : changes) {
    const std::uint32_t n = handles_.location(h).position;
    set_leaf_rate(n, rate);
    touch(n);
  }
  update_tree();
}

void TreeSampler::erase(OutcomeHandle h) {
  const std::uint32_t n = handles_.location(h).position;
  set_leaf_rate(n, 0.0);
  handles_.retire(h);
  --leaves_;

  if (leaves_ == 0) {
    free_node(n);
    root_ = kNone;
    last_leaf_ = kNone;
    total_rate_ = 0.0;
    last_update_visits_ = 0;
    return;
  }

  const std::uint32_t last = last_leaf_;
  const std::uint32_t old_parent = nodes_[last].parent;
  if (n != last) replace_child(nodes_[n].parent, n, last);
  // If n was the sibling of the last leaf, the last leaf now sits on the
  // left of old_parent and is itself the node promoted below.
  const std::uint32_t sibling = nodes_[old_parent].left;
  replace_child(nodes_[old_parent].parent, old_parent, sibling);

  if (n != last) touch(last);
  touch(sibling);
  free_node(n);
  free_node(old_parent);
  update_tree();
  last_leaf_ = find_last_leaf();
}

std::uint32_t TreeSampler::descend(double draw, std::uint64_t* visits) const {
  std::uint32_t n = root_;
  std::uint64_t count = 1;
  while (!nodes_[n].leaf) {
    const Node& node = nodes_[n];
    const double left_rate = nodes_[node.left].rate;
    // Ties go left; a zero-rate side is never entered, which also absorbs
    // residuals pushed past a subtree sum by rounding.
    if (left_rate > 0.0 && (draw <= left_rate || nodes_[node.right].rate <= 0.0)) {
      n = node.left;
    } else {
      draw -= left_rate;
      n = node.right;
    }
    ++count;
  }
  if (visits) *visits += count;
  return n;
}

Selection TreeSampler::select(double draw) const {
  if (!(total_rate_ > 0.0)) throw EmptyStructure();
  const std::uint32_t leaf = descend(draw, nullptr);
  const std::uint32_t slot = nodes_[leaf].slot;
  return {handles_.handle_of_slot(slot), handles_.payload_of_slot(slot)};
}

template <bool Count>
Selection TreeSampler::extract_impl(RandomSource& rng, ExtractStats* stats) {
  if (!(total_rate_ > 0.0)) throw EmptyStructure();
  const double draw = rng.uniform(total_rate_);
  const std::uint32_t leaf = descend(draw, Count ? &stats->node_visits : nullptr);
  if constexpr (Count) ++stats->extractions;
  const std::uint32_t slot = nodes_[leaf].slot;
  return {handles_.handle_of_slot(slot), handles_.payload_of_slot(slot)};
}

Selection TreeSampler::extract(RandomSource& rng) { return extract_impl<false>(rng, nullptr); }

Selection TreeSampler::extract(RandomSource& rng, ExtractStats& stats) {
  return extract_impl<true>(rng, &stats);
}

std::size_t TreeSampler::depth(OutcomeHandle h) const {
  std::uint32_t n = handles_.location(h).position;
  std::size_t d = 0;
  while (n != root_) {
    n = nodes_[n].parent;
    ++d;
  }
  return d;
}

std::size_t TreeSampler::max_depth() const {
  if (root_ == kNone) return 0;
  std::size_t d = 0;
  for (std::uint32_t n = root_; !nodes_[n].leaf; n = nodes_[n].left) ++d;
  return d;
}

std::string TreeSampler::check_invariants(double rel_tol) const {
  std::ostringstream err;
  if (!touched_.empty()) return "touched list not empty";

  if (root_ == kNone) {
    if (leaves_ != 0 || positive_ != 0 || total_rate_ != 0.0 || handles_.live_count() != 0 ||
        last_leaf_ != kNone) {
      return "empty tree with stale bookkeeping";
    }
    return {};
  }
  if (nodes_[root_].parent != kNone) return "root has a parent";

  // Breadth-first numbering; a heap-shaped tree puts the children of the
  // k-th node at positions 2k+1 and 2k+2 and all internal nodes first.
  std::vector<std::uint32_t> order{root_};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Node& node = nodes_[order[k]];
    if (node.queued) return "node left queued";
    if (node.leaf) {
      if (node.left != kNone || node.right != kNone) return "leaf with children";
      if (node.weight != 1) return "leaf weight != 1";
      continue;
    }
    if (node.left == kNone || node.right == kNone) return "internal node missing a child";
    if (nodes_[node.left].parent != order[k] || nodes_[node.right].parent != order[k]) {
      err << "broken parent link below node " << order[k];
      return err.str();
    }
    if (order.size() != 2 * k + 1) {
      err << "not heap shaped at breadth-first position " << k;
      return err.str();
    }
    order.push_back(node.left);
    order.push_back(node.right);
  }
  if (order.size() != 2 * leaves_ - 1) {
    err << "node count " << order.size() << " != 2N-1 for N=" << leaves_;
    return err.str();
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (nodes_[order[k]].leaf != (k + 1 >= leaves_)) return "internal/leaf ordering not heap shaped";
  }
  if (order.back() != last_leaf_) return "lastLeaf is not the rightmost deepest leaf";

  // Independent bottom-up recomputation of sums and weights.
  std::vector<double> sum(order.size());
  std::vector<std::uint64_t> count(order.size());
  std::size_t positive = 0;
  for (std::size_t k = order.size(); k-- > 0;) {
    const Node& node = nodes_[order[k]];
    if (node.leaf) {
      sum[k] = node.rate;
      count[k] = 1;
      if (node.rate > 0.0) ++positive;
      if (!handles_.slot_live(node.slot) ||
          handles_.location_of_slot(node.slot).position != order[k]) {
        return "leaf not bound to a live handle";
      }
    } else {
      sum[k] = sum[2 * k + 1] + sum[2 * k + 2];
      count[k] = count[2 * k + 1] + count[2 * k + 2];
      if (node.weight != count[k]) {
        err << "weight mismatch at breadth-first position " << k;
        return err.str();
      }
      if (!close(node.rate, sum[k], rel_tol)) {
        err << "rate sum mismatch at breadth-first position " << k << ": " << node.rate
            << " vs " << sum[k];
        return err.str();
      }
    }
  }
  if (total_rate_ != nodes_[root_].rate) return "totalRate != root.rate";
  if (positive != positive_) return "positive-rate count mismatch";
  if (handles_.live_count() != leaves_) return "handle table does not biject onto leaves";
  return {};
}

}  // namespace dynsample
