#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "kcollapse/error.hpp"
#include "kcollapse/graph.hpp"

namespace kcollapse {

using CoreValue = std::uint32_t;

// Per-node core values of a (live) graph.
struct CoreIndex {
  std::vector<CoreValue> core;
  CoreValue max_core = 0;

  CoreValue operator[](NodeId i) const { return core[i]; }
  std::size_t size() const { return core.size(); }

  friend bool operator==(const CoreIndex&, const CoreIndex&) = default;
};

// Bucket-by-degree peeling over the live edges of `view`. Linear time.
inline CoreIndex compute_cores(const GraphView& view) {
  const NodeId n = view.node_count();
  CoreIndex index;
  index.core.assign(n, 0);
  if (n == 0) return index;

  std::vector<std::uint32_t> degree(n);
  std::uint32_t max_degree = 0;
  for (NodeId i = 0; i < n; ++i) {
    degree[i] = view.live_degree(i);
    max_degree = std::max(max_degree, degree[i]);
  }
  // bin[d] = start of degree-d block in `order`; pos[i] = position of i.
  std::vector<std::uint32_t> bin(max_degree + 2, 0);
  for (NodeId i = 0; i < n; ++i) ++bin[degree[i] + 1];
  for (std::uint32_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
  std::vector<NodeId> order(n);
  std::vector<std::uint32_t> pos(n);
  {
    std::vector<std::uint32_t> next(bin.begin(), bin.end() - 1);
    for (NodeId i = 0; i < n; ++i) {
      pos[i] = next[degree[i]]++;
      order[pos[i]] = i;
    }
  }
  for (std::uint32_t p = 0; p < n; ++p) {
    NodeId v = order[p];
    index.core[v] = degree[v];
    view.for_each_neighbor(v, [&](NodeId u, EdgeId) {
      if (degree[u] > degree[v]) {
        // Move u to the front of its bucket, then shrink it into bucket d-1.
        std::uint32_t du = degree[u];
        std::uint32_t pu = pos[u];
        std::uint32_t pw = bin[du];
        NodeId w = order[pw];
        if (u != w) {
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
          pos[u] = pw;
        }
        ++bin[du];
        --degree[u];
      }
    });
  }
  index.max_core = *std::max_element(index.core.begin(), index.core.end());
  return index;
}

// Nodes with core value >= k, ascending. Empty when k exceeds max_core.
inline std::vector<NodeId> kcore_members(const CoreIndex& index, CoreValue k) {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < index.core.size(); ++i)
    if (index.core[i] >= k) out.push_back(i);
  return out;
}

struct CascadeReport {
  Edge edge;
  CoreValue level = 0;             // min core of the endpoints before removal
  std::vector<NodeId> collapsed;   // ascending; each dropped from level to level-1
};

namespace detail {

struct CascadeScratch {
  std::vector<std::int32_t> support;  // -1 = not yet computed
  std::vector<char> queued;
  std::vector<NodeId> touched;

  void ensure(NodeId n) {
    if (support.size() < n) {
      support.resize(n, -1);
      queued.resize(n, 0);
    }
  }
  void reset() {
    for (NodeId x : touched) {
      support[x] = -1;
      queued[x] = 0;
    }
    touched.clear();
  }
};

inline CascadeScratch& cascade_scratch() {
  thread_local CascadeScratch scratch;
  return scratch;
}

inline void check_index_shape(const GraphView& view, const CoreIndex& index) {
  if (index.core.size() != view.node_count())
    throw InvalidArgument("core index does not match the view's node count");
}

}  // namespace detail

// Deletes edge `id` from the view and updates `index` in place. Only nodes
// whose core equals the smaller endpoint core can drop, each by exactly one;
// the traversal starts at the endpoint(s) holding that core and evicts nodes
// whose count of neighbors at or above that level falls short of it.
inline CascadeReport cascade_after_removal(GraphView& view, CoreIndex& index, EdgeId id,
                                           bool validate = false) {
  detail::check_index_shape(view, index);
  if (!view.is_live(id)) throw InvalidArgument("edge " + to_string(view.base().edge(id)) + " is not live");
  if (validate && compute_cores(view) != index) throw InvalidArgument("core index is inconsistent with view");

  const Edge e = view.base().edge(id);
  const CoreValue level = std::min(index.core[e.u], index.core[e.v]);
  CascadeReport report{e, level, {}};
  view.delete_edge(id);

  auto& s = detail::cascade_scratch();
  s.ensure(view.node_count());
  auto support_of = [&](NodeId x) {
    std::int32_t count = 0;
    view.for_each_neighbor(x, [&](NodeId y, EdgeId) { count += index.core[y] >= level; });
    return count;
  };

  std::vector<NodeId> stack;
  for (NodeId root : {e.u, e.v}) {
    if (index.core[root] != level) continue;
    s.touched.push_back(root);
    s.support[root] = support_of(root);
    if (s.support[root] < static_cast<std::int32_t>(level)) {
      s.queued[root] = 1;
      stack.push_back(root);
    }
  }
  while (!stack.empty()) {
    NodeId w = stack.back();
    stack.pop_back();
    index.core[w] = level - 1;
    report.collapsed.push_back(w);
    view.for_each_neighbor(w, [&](NodeId x, EdgeId) {
      if (index.core[x] != level || s.queued[x]) return;
      if (s.support[x] < 0) {
        s.touched.push_back(x);
        s.support[x] = support_of(x);  // w is already excluded
      } else {
        --s.support[x];
      }
      if (s.support[x] < static_cast<std::int32_t>(level)) {
        s.queued[x] = 1;
        stack.push_back(x);
      }
    });
  }
  s.reset();

  if (!report.collapsed.empty() && level == index.max_core)
    index.max_core = *std::max_element(index.core.begin(), index.core.end());
  std::sort(report.collapsed.begin(), report.collapsed.end());

  if (validate && compute_cores(view) != index)
    throw Error("incremental core maintenance diverged from recomputation");
  return report;
}

inline CascadeReport cascade_after_removal(GraphView& view, CoreIndex& index, const Edge& e,
                                           bool validate = false) {
  auto id = view.base().find_edge(e);
  if (!id) throw InvalidArgument("edge " + to_string(e) + " not in graph");
  return cascade_after_removal(view, index, *id, validate);
}

// Reports what removing `id` would collapse, then restores view and index.
inline CascadeReport probe_removal(GraphView& view, CoreIndex& index, EdgeId id) {
  const CoreValue saved_max = index.max_core;
  CascadeReport report = cascade_after_removal(view, index, id);
  for (NodeId x : report.collapsed) ++index.core[x];
  index.max_core = saved_max;
  view.restore_edge(id);
  return report;
}

}  // namespace kcollapse
