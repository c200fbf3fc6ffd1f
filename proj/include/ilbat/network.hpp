#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ilbat/error.hpp"
#include "ilbat/state_vector.hpp"

namespace ilbat {

using NodeId = std::uint32_t;

/// An arc as written in a NET/INC file.
struct ArcSpec {
  NodeId u = 0;
  NodeId v = 0;
  double p = 0.0;
};

struct Arc {
  std::size_t id = 0;  // 1-based, equals bit position + 1
  NodeId u = 0;
  NodeId v = 0;
  std::uint32_t u_index = 0;  // dense node positions inside the network
  std::uint32_t v_index = 0;
  double p = 0.0;

  double q() const noexcept { return 1.0 - p; }
};

/// E(X): the arcs whose bit is set.
using ArcSubset = std::vector<Arc>;

/// An ordered batch of arcs to append, as parsed from an INC file.
struct IncrementProcess {
  std::vector<ArcSpec> arcs;

  std::size_t size() const noexcept { return arcs.size(); }
};

/// An increment resolved against the network it extends: arc ids and dense
/// node positions are final, and the nodes it introduces are known.
struct BoundIncrement {
  std::size_t first_arc = 0;  // bit position of the first new arc
  std::vector<Arc> arcs;
  std::vector<NodeId> new_nodes;  // in order of first appearance
  std::size_t nodes_before = 0;

  std::size_t size() const noexcept { return arcs.size(); }
  std::size_t nodes_after() const noexcept {
    return nodes_before + new_nodes.size();
  }
};

/// Undirected simple graph with per-arc working probabilities. The source
/// is node 1 and the sink is node n of the original network; increments may
/// add nodes but never move either terminal. Immutable once built.
class Network {
 public:
  struct Incidence {
    std::uint32_t arc;       // 0-based arc position
    std::uint32_t neighbor;  // dense node position
  };

  /// Builds the original network over nodes 1..node_count.
  static Network create(NodeId node_count, const std::vector<ArcSpec>& arcs) {
    if (node_count < 2)
      throw InvalidNetwork(
          "network needs distinct source (node 1) and sink (node n); got " +
          std::to_string(node_count) + " node(s)");
    Network net;
    net.sink_index_ = node_count - 1;
    net.node_ids_.reserve(node_count);
    for (NodeId id = 1; id <= node_count; ++id) {
      net.index_.emplace(id, static_cast<std::uint32_t>(id - 1));
      net.node_ids_.push_back(id);
    }
    for (const ArcSpec& spec : arcs) {
      for (NodeId end : {spec.u, spec.v})
        if (end < 1 || end > node_count)
          throw InvalidNetwork("arc endpoint " + std::to_string(end) +
                               " outside 1.." + std::to_string(node_count));
      net.check_arc(spec, [](const std::string& m) { throw InvalidNetwork(m); });
      net.push_arc(spec);
    }
    net.rebuild_incidence();
    return net;
  }

  /// Validates `process` against this network and resolves its nodes.
  BoundIncrement bind(const IncrementProcess& process) const {
    if (process.arcs.empty()) throw InvalidIncrement("increment has no arcs");
    BoundIncrement inc;
    inc.first_arc = arcs_.size();
    inc.nodes_before = node_ids_.size();

    std::unordered_map<NodeId, std::uint32_t> fresh;
    auto resolve = [&](NodeId id) -> std::uint32_t {
      if (id == 0) throw InvalidIncrement("node ids must be positive");
      if (auto it = index_.find(id); it != index_.end()) return it->second;
      if (auto it = fresh.find(id); it != fresh.end()) return it->second;
      const auto pos = static_cast<std::uint32_t>(inc.nodes_after());
      fresh.emplace(id, pos);
      inc.new_nodes.push_back(id);
      return pos;
    };

    std::unordered_set<std::uint64_t> seen;
    for (const ArcSpec& spec : process.arcs) {
      check_arc(spec, [](const std::string& m) { throw InvalidIncrement(m); });
      if (!seen.insert(pair_key(spec.u, spec.v)).second)
        throw InvalidIncrement("increment repeats arc (" +
                               std::to_string(spec.u) + ", " +
                               std::to_string(spec.v) + ")");
      Arc arc;
      arc.id = inc.first_arc + inc.arcs.size() + 1;
      arc.u = spec.u;
      arc.v = spec.v;
      arc.u_index = resolve(spec.u);
      arc.v_index = resolve(spec.v);
      arc.p = spec.p;
      inc.arcs.push_back(arc);
    }
    return inc;
  }

  /// G ⊕ P. `inc` must have been bound against this exact network.
  Network extend(const BoundIncrement& inc) const {
    if (inc.first_arc != arcs_.size() || inc.nodes_before != node_ids_.size())
      throw InvalidIncrement("increment was bound against a different network");
    Network next = *this;
    for (NodeId id : inc.new_nodes) {
      next.index_.emplace(id, static_cast<std::uint32_t>(next.node_ids_.size()));
      next.node_ids_.push_back(id);
    }
    for (const Arc& arc : inc.arcs) {
      next.pairs_.insert(pair_key(arc.u, arc.v));
      next.arcs_.push_back(arc);
    }
    next.rebuild_incidence();
    return next;
  }

  Network extend(const IncrementProcess& process) const {
    return extend(bind(process));
  }

  std::size_t node_count() const noexcept { return node_ids_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }

  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc& arc(std::size_t position) const { return arcs_.at(position); }

  NodeId source() const noexcept { return node_ids_[0]; }
  NodeId sink() const noexcept { return node_ids_[sink_index_]; }
  std::uint32_t source_index() const noexcept { return 0; }
  std::uint32_t sink_index() const noexcept { return sink_index_; }

  /// Node ids by dense position: 1..n first, then increment nodes.
  std::span<const NodeId> node_ids() const noexcept { return node_ids_; }
  NodeId node_id(std::size_t position) const { return node_ids_.at(position); }

  std::optional<std::uint32_t> index_of(NodeId id) const {
    if (auto it = index_.find(id); it != index_.end()) return it->second;
    return std::nullopt;
  }

  bool has_node(NodeId id) const { return index_.contains(id); }
  bool has_arc(NodeId u, NodeId v) const {
    return pairs_.contains(pair_key(u, v));
  }

  std::span<const Incidence> incident(std::size_t node_position) const {
    return std::span<const Incidence>(incidence_)
        .subspan(offsets_[node_position],
                 offsets_[node_position + 1] - offsets_[node_position]);
  }

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b) noexcept {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
  }

  template <class Fail>
  void check_arc(const ArcSpec& spec, Fail fail) const {
    const std::string name =
        "arc (" + std::to_string(spec.u) + ", " + std::to_string(spec.v) + ")";
    if (spec.u == spec.v) fail(name + " is a self-loop");
    if (!(spec.p >= 0.0 && spec.p <= 1.0))
      fail(name + " has probability outside [0, 1]");
    if (pairs_.contains(pair_key(spec.u, spec.v)))
      fail(name + " duplicates an existing arc");
  }

  void push_arc(const ArcSpec& spec) {
    Arc arc;
    arc.id = arcs_.size() + 1;
    arc.u = spec.u;
    arc.v = spec.v;
    arc.u_index = index_.at(spec.u);
    arc.v_index = index_.at(spec.v);
    arc.p = spec.p;
    pairs_.insert(pair_key(spec.u, spec.v));
    arcs_.push_back(arc);
  }

  void rebuild_incidence() {
    offsets_.assign(node_ids_.size() + 1, 0);
    for (const Arc& a : arcs_) {
      ++offsets_[a.u_index + 1];
      ++offsets_[a.v_index + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i)
      offsets_[i] += offsets_[i - 1];
    incidence_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
      const Arc& a = arcs_[k];
      const auto pos = static_cast<std::uint32_t>(k);
      incidence_[fill[a.u_index]++] = {pos, a.v_index};
      incidence_[fill[a.v_index]++] = {pos, a.u_index};
    }
  }

  std::vector<NodeId> node_ids_;
  std::unordered_map<NodeId, std::uint32_t> index_;
  std::vector<Arc> arcs_;
  std::unordered_set<std::uint64_t> pairs_;
  std::uint32_t sink_index_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
};

/// Pr(X): product of p_i over working arcs and q_i over failed ones.
inline double vector_probability(const StateVector& x, const Network& net) {
  if (x.size() != net.arc_count())
    throw std::invalid_argument("state vector has " + std::to_string(x.size()) +
                                " coordinates, network has " +
                                std::to_string(net.arc_count()) + " arcs");
  double pr = 1.0;
  const auto arcs = net.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i)
    pr *= x[i] ? arcs[i].p : arcs[i].q();
  return pr;
}

/// Pr(Y) for a vector over the increment's own arcs.
inline double vector_probability(const StateVector& y, const BoundIncrement& inc) {
  if (y.size() != inc.size())
    throw std::invalid_argument("increment vector length mismatch");
  double pr = 1.0;
  for (std::size_t i = 0; i < inc.arcs.size(); ++i)
    pr *= y[i] ? inc.arcs[i].p : inc.arcs[i].q();
  return pr;
}

/// X ⊗ Y where X covers every arc before `inc` and Y exactly `inc`'s arcs.
inline StateVector convolve(const StateVector& x, const StateVector& y,
                            const BoundIncrement& inc) {
  if (x.size() != inc.first_arc || y.size() != inc.size())
    throw std::invalid_argument(
        "convolution operands overlap or leave a gap in arc coverage");
  return convolve(x, y);
}

inline ArcSubset arc_subset(const StateVector& x, const Network& net) {
  if (x.size() != net.arc_count())
    throw std::invalid_argument("state vector length mismatch");
  ArcSubset out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) out.push_back(net.arc(i));
  return out;
}

}  // namespace ilbat
