#pragma once

// Brute-force reference: counts through all 2^m arc states as an integer and
// decides each with a plain breadth-first search over its own adjacency
// lists. Slow on purpose; shares nothing with the BAT/partition path.

#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "ilbat/error.hpp"
#include "ilbat/network.hpp"
#include "ilbat/state_vector.hpp"

namespace ilbat::oracle {

inline constexpr std::size_t kDefaultCap = 24;

struct Summary {
  double reliability = 0.0;
  std::uint64_t vectors = 0;
  std::uint64_t feasible = 0;
};

namespace detail {

struct Graph {
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency;  // (neighbor, arc)
  std::vector<double> p;
};

inline Graph build(const Network& net, std::size_t cap) {
  const std::size_t m = net.arc_count();
  if (m > cap)
    throw CapExceeded("oracle limited to " + std::to_string(cap) + " arcs; network has " +
                      std::to_string(m));
  std::map<NodeId, std::size_t> local;
  for (NodeId id : net.node_ids()) local.emplace(id, local.size());
  Graph g;
  g.adjacency.resize(local.size());
  g.source = local.at(net.source());
  g.sink = local.at(net.sink());
  std::size_t k = 0;
  for (const Arc& a : net.arcs()) {
    g.adjacency[local.at(a.u)].push_back({local.at(a.v), k});
    g.adjacency[local.at(a.v)].push_back({local.at(a.u), k});
    g.p.push_back(a.p);
    ++k;
  }
  return g;
}

inline bool reaches(const Graph& g, std::uint64_t mask) {
  std::vector<bool> seen(g.adjacency.size(), false);
  std::queue<std::size_t> q;
  q.push(g.source);
  seen[g.source] = true;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    if (u == g.sink) return true;
    for (auto [v, arc] : g.adjacency[u]) {
      if (((mask >> arc) & 1U) == 0 || seen[v]) continue;
      seen[v] = true;
      q.push(v);
    }
  }
  return false;
}

inline double probability(const Graph& g, std::uint64_t mask) {
  double pr = 1.0;
  for (std::size_t k = 0; k < g.p.size(); ++k)
    pr *= ((mask >> k) & 1U) ? g.p[k] : 1.0 - g.p[k];
  return pr;
}

}  // namespace detail

inline Summary brute_force(const Network& net, std::size_t cap = kDefaultCap) {
  const auto g = detail::build(net, cap);
  const std::uint64_t total = std::uint64_t{1} << net.arc_count();
  long double sum = 0.0L;
  Summary out;
  out.vectors = total;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (!detail::reaches(g, mask)) continue;
    sum += detail::probability(g, mask);
    ++out.feasible;
  }
  out.reliability = static_cast<double>(sum);
  return out;
}

/// Σ Pr(X) over every X whose working arcs join source and sink.
inline double brute_force_reliability(const Network& net, std::size_t cap = kDefaultCap) {
  return brute_force(net, cap).reliability;
}

/// Exactly the feasible vectors; the complement is the reference I_0.
inline std::set<StateVector> brute_force_feasible_set(const Network& net,
                                                     std::size_t cap = kDefaultCap) {
  const auto g = detail::build(net, cap);
  const std::uint64_t total = std::uint64_t{1} << net.arc_count();
  std::set<StateVector> out;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (detail::reaches(g, mask))
      out.insert(StateVector::from_integer(mask, net.arc_count()));
  return out;
}

}  // namespace ilbat::oracle
