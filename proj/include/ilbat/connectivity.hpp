#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ilbat/disjoint_sets.hpp"
#include "ilbat/network.hpp"
#include "ilbat/state_vector.hpp"

namespace ilbat {

using NodeSet = std::vector<NodeId>;  // sorted ascending

/// Layers built by the path-based layered search from the source.
struct LayerTrace {
  std::vector<NodeSet> layers;  // a trailing empty layer marks a dead end
  bool connected = false;
  std::size_t arcs_scanned = 0;
};

/// Layered breadth-first search over G(X): L1 = {source}, each next layer
/// holds the unvisited neighbours of the previous one through working arcs.
/// Stops as soon as the sink shows up or a layer comes out empty.
inline LayerTrace plsa(const Network& net, const StateVector& x) {
  if (x.size() != net.arc_count())
    throw std::invalid_argument("state vector length mismatch");
  LayerTrace trace;
  std::vector<char> seen(net.node_count(), 0);
  std::vector<std::uint32_t> layer{net.source_index()};
  seen[net.source_index()] = 1;
  trace.layers.push_back({net.source()});
  while (true) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t u : layer) {
      for (const auto& inc : net.incident(u)) {
        ++trace.arcs_scanned;
        if (!x[inc.arc] || seen[inc.neighbor]) continue;
        seen[inc.neighbor] = 1;
        next.push_back(inc.neighbor);
      }
    }
    NodeSet ids;
    ids.reserve(next.size());
    for (std::uint32_t v : next) ids.push_back(net.node_id(v));
    std::sort(ids.begin(), ids.end());
    trace.layers.push_back(std::move(ids));
    if (seen[net.sink_index()]) {
      trace.connected = true;
      return trace;
    }
    if (next.empty()) return trace;
    layer = std::move(next);
  }
}

/// Connected-component summary of G(X). Every node position carries a
/// component label in canonical form: the source's component is 0, the
/// sink's is 1 unless it shares the source's, and the remaining (middle)
/// components are numbered upwards in order of their lowest node position.
/// Two partitions of the same node set are equal iff their labels are.
class NodePartition {
 public:
  using Label = std::uint32_t;

  NodePartition() = default;

  /// Canonicalizes arbitrary component labels.
  static NodePartition from_labels(std::span<const Label> raw,
                                   std::uint32_t sink_index) {
    constexpr Label kUnset = std::numeric_limits<Label>::max();
    Label top = 0;
    for (Label l : raw) top = std::max(top, l);
    std::vector<Label> remap(raw.empty() ? 0 : top + 1, kUnset);

    NodePartition p;
    p.sink_ = sink_index;
    remap[raw[0]] = 0;
    Label next = 1;
    if (remap[raw[sink_index]] == kUnset) remap[raw[sink_index]] = next++;
    p.labels_.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Label& m = remap[raw[i]];
      if (m == kUnset) m = next++;
      p.labels_[i] = m;
    }
    p.count_ = next;
    return p;
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t component_count() const noexcept { return count_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label label(std::size_t position) const { return labels_.at(position); }
  std::uint32_t sink_index() const noexcept { return sink_; }

  /// S(X) = T(X): the source and sink share a component.
  bool connected() const noexcept {
    return !labels_.empty() && labels_[sink_] == 0;
  }

  NodeSet source_set(std::span<const NodeId> ids) const { return members(ids, 0); }
  NodeSet sink_set(std::span<const NodeId> ids) const {
    return members(ids, labels_[sink_]);
  }

  /// One node set per middle component, ordered by label.
  std::vector<NodeSet> middle_components(std::span<const NodeId> ids) const {
    const Label first = connected() ? 1 : 2;
    std::vector<NodeSet> out(count_ > first ? count_ - first : 0);
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] >= first) out[labels_[i] - first].push_back(ids[i]);
    for (auto& s : out) std::sort(s.begin(), s.end());
    return out;
  }

  /// M(X) = V - [S(X) ∪ T(X)].
  NodeSet middle_set(std::span<const NodeId> ids) const {
    NodeSet out;
    const Label sink_label = labels_[sink_];
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] != 0 && labels_[i] != sink_label) out.push_back(ids[i]);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Adds `extra` isolated nodes after the existing ones. Canonical form is
  /// preserved because the new positions sort after every existing one.
  NodePartition with_isolated(std::size_t extra) const {
    NodePartition out = *this;
    out.labels_.reserve(labels_.size() + extra);
    for (std::size_t k = 0; k < extra; ++k) out.labels_.push_back(out.count_++);
    return out;
  }

  std::size_t memory_bytes() const noexcept {
    return sizeof(*this) + labels_.capacity() * sizeof(Label);
  }

  friend bool operator==(const NodePartition&, const NodePartition&) = default;

 private:
  NodeSet members(std::span<const NodeId> ids, Label which) const {
    NodeSet out;
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == which) out.push_back(ids[i]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Label> labels_;
  std::uint32_t sink_ = 0;
  Label count_ = 0;
};

/// Exact components of G(X), one sweep per component.
inline NodePartition partition_nodes(const Network& net, const StateVector& x) {
  if (x.size() != net.arc_count())
    throw std::invalid_argument("state vector length mismatch");
  constexpr NodePartition::Label kUnset =
      std::numeric_limits<NodePartition::Label>::max();
  std::vector<NodePartition::Label> label(net.node_count(), kUnset);
  std::vector<std::uint32_t> stack;
  NodePartition::Label next = 0;

  auto sweep = [&](std::uint32_t start) {
    if (label[start] != kUnset) return;
    const auto comp = next++;
    label[start] = comp;
    stack.push_back(start);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& inc : net.incident(u)) {
        if (!x[inc.arc] || label[inc.neighbor] != kUnset) continue;
        label[inc.neighbor] = comp;
        stack.push_back(inc.neighbor);
      }
    }
  };

  sweep(net.source_index());
  sweep(net.sink_index());
  for (std::uint32_t v = 0; v < net.node_count(); ++v) sweep(v);
  return NodePartition::from_labels(label, net.sink_index());
}

inline bool is_connected(const NodePartition& p) noexcept { return p.connected(); }

/// Outcome of extending one retained vector by one sub-BAT vector.
struct IncrementOutcome {
  std::optional<NodePartition> partition;  // empty when feasible

  bool feasible() const noexcept { return !partition.has_value(); }
};

namespace detail {

/// Unions the components touched by Y's working arcs. With `stop_early`,
/// returns nullopt as soon as source and sink meet.
inline std::optional<NodePartition> merge_increment(const NodePartition& p,
                                                    const StateVector& y,
                                                    const BoundIncrement& inc,
                                                    bool stop_early) {
  if (p.node_count() != inc.nodes_before)
    throw std::invalid_argument("partition does not match the increment's base network");
  if (y.size() != inc.size())
    throw std::invalid_argument("increment vector has " + std::to_string(y.size()) +
                                " coordinates, increment has " +
                                std::to_string(inc.size()) + " arcs");

  if (y.none()) {
    if (stop_early && p.connected()) return std::nullopt;
    return p.with_isolated(inc.new_nodes.size());
  }

  const auto base = static_cast<std::uint32_t>(p.component_count());
  const auto labels = p.labels();
  auto component = [&](std::uint32_t position) -> std::uint32_t {
    return position < inc.nodes_before
               ? labels[position]
               : base + (position - static_cast<std::uint32_t>(inc.nodes_before));
  };

  thread_local DisjointSets sets;
  sets.reset(base + inc.new_nodes.size());
  const std::uint32_t source = 0;
  const std::uint32_t sink = labels[p.sink_index()];
  if (stop_early && source == sink) return std::nullopt;

  for (std::size_t k = 0; k < inc.arcs.size(); ++k) {
    if (!y[k]) continue;
    const Arc& arc = inc.arcs[k];
    sets.unite(component(arc.u_index), component(arc.v_index));
    if (stop_early && sets.same(source, sink)) return std::nullopt;
  }

  std::vector<NodePartition::Label> raw(inc.nodes_after());
  for (std::uint32_t pos = 0; pos < raw.size(); ++pos)
    raw[pos] = sets.find(component(pos));
  return NodePartition::from_labels(raw, p.sink_index());
}

}  // namespace detail

/// Updates the partition of a retained vector X for X ⊗ Y, where Y covers
/// the increment's arcs. An all-zero Y only adds the increment's new nodes
/// as singleton middle components. Otherwise each working arc of Y merges
/// the components of its endpoints; the result is feasible the moment the
/// source and sink components meet, and the remaining unions are skipped.
inline IncrementOutcome apply_increment(const NodePartition& p, const StateVector& y,
                                        const BoundIncrement& inc) {
  return {detail::merge_increment(p, y, inc, /*stop_early=*/true)};
}

/// Like apply_increment but always returns the full partition of X ⊗ Y,
/// including for feasible results.
inline NodePartition extend_partition(const NodePartition& p, const StateVector& y,
                                      const BoundIncrement& inc) {
  return *detail::merge_increment(p, y, inc, /*stop_early=*/false);
}

}  // namespace ilbat
