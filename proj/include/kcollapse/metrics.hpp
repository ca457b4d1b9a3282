#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "kcollapse/cores.hpp"
#include "kcollapse/error.hpp"
#include "kcollapse/graph.hpp"

namespace kcollapse {

// Live neighbors of i whose core value is at least k, ascending.
inline std::vector<NodeId> supportive_neighbors(const GraphView& view, const CoreIndex& index, NodeId i,
                                                CoreValue k) {
  std::vector<NodeId> out;
  view.for_each_neighbor(i, [&](NodeId j, EdgeId) {
    if (index.core[j] >= k) out.push_back(j);
  });
  return out;
}

inline std::uint32_t supportive_count(const GraphView& view, const CoreIndex& index, NodeId i, CoreValue k) {
  std::uint32_t count = 0;
  view.for_each_neighbor(i, [&](NodeId j, EdgeId) { count += index.core[j] >= k; });
  return count;
}

namespace detail {

inline std::uint32_t raw_strength(const GraphView& view, const CoreIndex& index, NodeId i) {
  const CoreValue k = index.core[i];
  return supportive_count(view, index, i, k) + 1 - k;
}

}  // namespace detail

// Number of supportive-neighbor disconnections that always ejects i from its
// core: |SN(i, C(i))| - C(i) + 1.
inline std::uint32_t core_strength(const GraphView& view, const CoreIndex& index, NodeId i) {
  view.base().check_node(i);
  if (index.core[i] == 0)
    throw InvalidArgument("core strength undefined for node " + std::to_string(i) + " with core value 0");
  return detail::raw_strength(view, index, i);
}

// Lazily computed core strengths over a view/index pair that evolves through
// cascade_after_removal. Call invalidate() with each report.
class StrengthCache {
 public:
  StrengthCache(const GraphView& view, const CoreIndex& index)
      : view_(&view), index_(&index), value_(view.node_count(), kDirty) {}

  std::uint32_t operator()(NodeId i) {
    if (value_[i] == kDirty) value_[i] = detail::raw_strength(*view_, *index_, i);
    return value_[i];
  }

  // Strength depends on the node's own core, its live edges and its
  // neighbors' cores; anything adjacent to a change is dropped.
  void invalidate(const CascadeReport& report) {
    value_[report.edge.u] = kDirty;
    value_[report.edge.v] = kDirty;
    for (NodeId x : report.collapsed) {
      value_[x] = kDirty;
      view_->for_each_neighbor(x, [&](NodeId y, EdgeId) { value_[y] = kDirty; });
    }
  }

  void invalidate_all() { std::fill(value_.begin(), value_.end(), kDirty); }

 private:
  static constexpr std::uint32_t kDirty = UINT32_MAX;
  const GraphView* view_;
  const CoreIndex* index_;
  std::vector<std::uint32_t> value_;
};

// Nodes with core value k and core strength 1, ascending.
template <class Strength>
std::vector<NodeId> corona_nodes(const GraphView& view, const CoreIndex& index, CoreValue k, Strength&& strength) {
  (void)view;
  std::vector<NodeId> out;
  for (NodeId u = 0; u < index.core.size(); ++u)
    if (index.core[u] == k && k >= 1 && strength(u) == 1) out.push_back(u);
  return out;
}

inline std::vector<NodeId> corona_nodes(const GraphView& view, const CoreIndex& index, CoreValue k) {
  return corona_nodes(view, index, k, [&](NodeId u) { return detail::raw_strength(view, index, u); });
}

struct CoronaPedigree {
  CoreValue k = 0;
  std::vector<NodeId> members;         // ascending
  std::vector<Edge> incident_edges;    // live edges from a member into the k-core, ascending

  bool contains(NodeId x) const { return std::binary_search(members.begin(), members.end(), x); }
};

// Maximal connected set of corona nodes sharing i's core value. Incident
// edges are restricted to those whose other endpoint is a supporter (core
// >= k): removing any of them ejects every member.
template <class Strength>
CoronaPedigree corona_pedigree(const GraphView& view, const CoreIndex& index, NodeId i, Strength&& strength) {
  view.base().check_node(i);
  const CoreValue k = index.core[i];
  if (k == 0 || strength(i) != 1)
    throw InvalidArgument("node " + std::to_string(i) + " is not a corona node");

  CoronaPedigree p;
  p.k = k;
  std::vector<NodeId> frontier{i};
  auto mark = [&](NodeId x) {
    auto it = std::lower_bound(p.members.begin(), p.members.end(), x);
    if (it != p.members.end() && *it == x) return false;
    p.members.insert(it, x);
    return true;
  };
  mark(i);
  while (!frontier.empty()) {
    NodeId u = frontier.back();
    frontier.pop_back();
    view.for_each_neighbor(u, [&](NodeId v, EdgeId) {
      if (index.core[v] == k && strength(v) == 1 && mark(v)) frontier.push_back(v);
    });
  }

  std::vector<EdgeId> ids;
  for (NodeId m : p.members)
    view.for_each_neighbor(m, [&](NodeId v, EdgeId id) {
      if (index.core[v] >= k) ids.push_back(id);
    });
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  p.incident_edges.reserve(ids.size());
  for (EdgeId id : ids) p.incident_edges.push_back(view.base().edge(id));
  return p;
}

inline CoronaPedigree corona_pedigree(const GraphView& view, const CoreIndex& index, NodeId i) {
  return corona_pedigree(view, index, i, [&](NodeId u) { return detail::raw_strength(view, index, u); });
}

// Live edges whose smaller endpoint core equals k, in edge-id order.
inline std::vector<EdgeId> candidate_edge_ids(const GraphView& view, const CoreIndex& index, CoreValue k) {
  std::vector<EdgeId> out;
  const auto edges = view.base().edges();
  for (EdgeId id = 0; id < edges.size(); ++id)
    if (view.is_live(id) && std::min(index.core[edges[id].u], index.core[edges[id].v]) == k) out.push_back(id);
  return out;
}

inline std::vector<Edge> candidate_edges(const GraphView& view, const CoreIndex& index, CoreValue k) {
  std::vector<Edge> out;
  for (EdgeId id : candidate_edge_ids(view, index, k)) out.push_back(view.base().edge(id));
  return out;
}

// Whether removing e alone drops at least one core value.
template <class Strength>
bool single_edge_collapse_check(const GraphView& view, const CoreIndex& index, const Edge& e, Strength&& strength) {
  if (!view.is_live(e)) throw InvalidArgument("edge " + to_string(e) + " is not live");
  const auto cs_u = static_cast<std::int64_t>(strength(e.u));
  const auto cs_v = static_cast<std::int64_t>(strength(e.v));
  const auto c_u = static_cast<std::int64_t>(index.core[e.u]);
  const auto c_v = static_cast<std::int64_t>(index.core[e.v]);
  return std::min(cs_u, cs_v) == 1 && (cs_u - cs_v) * (c_u - c_v) >= 0;
}

inline bool single_edge_collapse_check(const GraphView& view, const CoreIndex& index, const Edge& e) {
  return single_edge_collapse_check(view, index, e,
                                    [&](NodeId u) { return detail::raw_strength(view, index, u); });
}

}  // namespace kcollapse
