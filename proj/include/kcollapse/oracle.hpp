#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kcollapse/collapse.hpp"
#include "kcollapse/cores.hpp"
#include "kcollapse/error.hpp"
#include "kcollapse/metrics.hpp"

namespace kcollapse {

enum class CandidateMode { Reduced, Full };

struct OracleOptions {
  CandidateMode mode = CandidateMode::Reduced;
  std::uint32_t size_cap = 4;
  std::uint64_t budget = 10'000'000;  // subset evaluations
};

// True iff removing `edges` from the graph drops the target's core value.
inline bool verify_collapse(const Graph& graph, NodeId target, std::span<const Edge> edges) {
  graph.check_node(target);
  GraphView before(graph);
  const CoreValue k = compute_cores(before).core[target];
  GraphView view(graph);
  for (const Edge& e : edges) view.delete_edge(e);
  return compute_cores(view).core[target] < k;
}

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t m) {
  if (m > n) return 0;
  m = std::min(m, n - m);
  long double r = 1;
  for (std::uint64_t j = 1; j <= m; ++j) r = r * static_cast<long double>(n - m + j) / static_cast<long double>(j);
  if (r > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
    return std::numeric_limits<std::uint64_t>::max() / 2;
  return static_cast<std::uint64_t>(r + 0.5L);
}

// k-core membership test on G_k minus a small edge set. G_k is already a
// k-core, so peeling only needs to start from endpoints of removed edges.
class KCoreProbe {
 public:
  KCoreProbe(const GraphView& view, const CoreIndex& index, CoreValue k)
      : view_(&view), index_(&index), k_(k), degree_(view.node_count(), 0),
        removed_(view.base().edge_count(), 0), work_(view.node_count(), 0), seen_(view.node_count(), 0),
        gone_(view.node_count(), 0) {
    for (NodeId v = 0; v < view.node_count(); ++v)
      if (index.core[v] >= k) degree_[v] = supportive_count(view, index, v, k);
  }

  bool target_survives(NodeId target, std::span<const EdgeId> edges) {
    std::vector<NodeId> touched;
    std::vector<NodeId> stack;
    const auto& base = view_->base();
    auto in_core = [&](NodeId x) { return index_->core[x] >= k_; };
    auto touch = [&](NodeId x) {
      if (!seen_[x]) {
        seen_[x] = 1;
        work_[x] = static_cast<std::int32_t>(degree_[x]);
        touched.push_back(x);
      }
    };
    for (EdgeId id : edges) {
      removed_[id] = 1;
      const Edge& e = base.edge(id);
      if (!in_core(e.u) || !in_core(e.v)) continue;
      touch(e.u);
      touch(e.v);
      --work_[e.u];
      --work_[e.v];
    }
    for (NodeId x : touched)
      if (work_[x] < static_cast<std::int32_t>(k_) && !gone_[x]) {
        gone_[x] = 1;
        stack.push_back(x);
      }
    while (!stack.empty() && !gone_[target]) {
      NodeId w = stack.back();
      stack.pop_back();
      view_->for_each_neighbor(w, [&](NodeId y, EdgeId id) {
        if (removed_[id] || !in_core(y) || gone_[y]) return;
        touch(y);
        if (--work_[y] < static_cast<std::int32_t>(k_)) {
          gone_[y] = 1;
          stack.push_back(y);
        }
      });
    }
    const bool survives = !gone_[target];
    for (EdgeId id : edges) removed_[id] = 0;
    for (NodeId x : touched) {
      seen_[x] = 0;
      gone_[x] = 0;
    }
    return survives;
  }

 private:
  const GraphView* view_;
  const CoreIndex* index_;
  CoreValue k_;
  std::vector<std::uint32_t> degree_;
  std::vector<char> removed_;
  std::vector<std::int32_t> work_;
  std::vector<char> seen_;
  std::vector<char> gone_;
};

}  // namespace detail

// Exact node robustness by subset enumeration in increasing cardinality and
// lexicographic edge order. Reduced mode searches only edges whose smaller
// endpoint core equals the target's, inside the target's k-core component.
inline CollapseResult exact_nr(const Graph& graph, NodeId target, const OracleOptions& options = {}) {
  const auto start = Clock::now();
  graph.check_node(target);
  GraphView view(graph);
  CoreIndex index = compute_cores(view);
  const CoreValue k = index.core[target];
  if (k == 0) throw InvalidArgument("node " + graph.label(target) + " has core value 0; nothing to collapse");
  const std::uint32_t cs = core_strength(view, index, target);

  std::vector<EdgeId> candidates;
  if (options.mode == CandidateMode::Full) {
    candidates.resize(graph.edge_count());
    for (EdgeId id = 0; id < candidates.size(); ++id) candidates[id] = id;
  } else {
    std::vector<char> component(graph.node_count(), 0);
    std::vector<NodeId> stack{target};
    component[target] = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      view.for_each_neighbor(u, [&](NodeId v, EdgeId) {
        if (index.core[v] >= k && !component[v]) {
          component[v] = 1;
          stack.push_back(v);
        }
      });
    }
    for (EdgeId id : candidate_edge_ids(view, index, k))
      if (component[graph.edge(id).u]) candidates.push_back(id);
  }

  detail::KCoreProbe probe(view, index, k);
  const std::uint32_t max_size = std::min<std::uint32_t>(cs, options.size_cap);
  const std::size_t n = candidates.size();
  std::uint64_t spent = 0;
  std::vector<std::size_t> pick;
  std::vector<EdgeId> subset;
  for (std::uint32_t m = 1; m <= max_size && m <= n; ++m) {
    const std::uint64_t cost = detail::binomial_capped(n, m);
    if (spent + cost > options.budget)
      throw OracleInfeasible("exhaustive search for node " + graph.label(target) + " needs more than " +
                             std::to_string(options.budget) + " subset evaluations");
    spent += cost;
    pick.resize(m);
    subset.resize(m);
    for (std::size_t j = 0; j < m; ++j) pick[j] = j;
    while (true) {
      for (std::size_t j = 0; j < m; ++j) subset[j] = candidates[pick[j]];
      if (!probe.target_survives(target, subset)) {
        CollapseResult r;
        r.target = target;
        r.method = "oracle";
        r.k = k;
        r.initial_strength = cs;
        GraphView replay(graph);
        CoreIndex cores = index;
        r.trace.push_back(supportive_count(replay, cores, target, k));
        for (EdgeId id : subset) {
          r.removed.push_back(graph.edge(id));
          cascade_after_removal(replay, cores, id);
          r.trace.push_back(supportive_count(replay, cores, target, k));
        }
        r.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return r;
      }
      // Next combination in lexicographic order.
      std::size_t j = m;
      while (j > 0 && pick[j - 1] == n - m + (j - 1)) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t t = j; t < m; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  throw OracleInfeasible("node " + graph.label(target) + " needs more than " + std::to_string(max_size) +
                         " removals; raise the size cap");
}

}  // namespace kcollapse
