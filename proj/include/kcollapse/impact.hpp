#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kcollapse/cores.hpp"
#include "kcollapse/error.hpp"
#include "kcollapse/graph.hpp"
#include "kcollapse/metrics.hpp"

namespace kcollapse {

// Estimated effect on a target's neighborhood if a corona seed collapses.
// `followed` are nodes expected to drop out of the core along with the seed;
// `influenced` are nodes that lose at least one supporter.
struct ImpactReport {
  std::uint32_t followed_in_nbhd = 0;
  std::uint32_t influenced_in_nbhd = 0;
  std::vector<NodeId> followed;    // ascending
  std::vector<NodeId> influenced;  // ascending
};

// Stack propagation from `seed`: every pop of u counts one lost supporter in
// tally[u]; u is influenced, and once tally[u] reaches CS(u) it is followed
// and pushes its same-core neighbors v with CS(v) > tally[v] (ascending id).
// Popped nodes already followed are skipped. Read-only on view and index.
template <class Strength>
ImpactReport calculate_impact(const GraphView& view, const CoreIndex& index, NodeId target, NodeId seed,
                              Strength&& strength) {
  view.base().check_node(target);
  view.base().check_node(seed);
  if (index.core[seed] == 0 || strength(seed) != 1)
    throw InvalidArgument("impact seed " + std::to_string(seed) + " is not a corona node");

  std::unordered_map<NodeId, std::uint32_t> tally;
  std::unordered_set<NodeId> followed;
  std::unordered_set<NodeId> influenced;
  std::vector<NodeId> stack{seed};
  auto tally_of = [&](NodeId v) -> std::uint32_t {
    auto it = tally.find(v);
    return it == tally.end() ? 0 : it->second;
  };

  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (followed.count(u)) continue;
    const std::uint32_t t = ++tally[u];
    influenced.insert(u);
    if (strength(u) <= t) {
      followed.insert(u);
      const CoreValue ku = index.core[u];
      view.for_each_neighbor(u, [&](NodeId v, EdgeId) {
        if (index.core[v] == ku && strength(v) > tally_of(v)) stack.push_back(v);
      });
    }
  }

  ImpactReport report;
  report.followed.assign(followed.begin(), followed.end());
  report.influenced.assign(influenced.begin(), influenced.end());
  std::sort(report.followed.begin(), report.followed.end());
  std::sort(report.influenced.begin(), report.influenced.end());
  view.for_each_neighbor(target, [&](NodeId j, EdgeId) {
    report.followed_in_nbhd += followed.count(j) ? 1u : 0u;
    report.influenced_in_nbhd += influenced.count(j) ? 1u : 0u;
  });
  return report;
}

inline ImpactReport calculate_impact(const GraphView& view, const CoreIndex& index, NodeId target, NodeId seed) {
  return calculate_impact(view, index, target, seed,
                          [&](NodeId u) { return detail::raw_strength(view, index, u); });
}

}  // namespace kcollapse
