#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kcollapse/cores.hpp"
#include "kcollapse/error.hpp"
#include "kcollapse/graph.hpp"
#include "kcollapse/metrics.hpp"

namespace kcollapse {

using Clock = std::chrono::steady_clock;

// Output of every collapse method.
struct CollapseResult {
  NodeId target = 0;
  std::string method;
  CoreValue k = 0;                      // target's original core value
  std::uint32_t initial_strength = 0;   // CS of the target in the input graph
  std::vector<Edge> removed;            // in removal order
  std::vector<std::uint32_t> trace;     // |SN(target, k)| before and after each removal
  double wall_seconds = 0.0;
  bool budget_fallback = false;         // greedy exhausted its CS budget; direct disconnection used

  std::size_t nr() const { return removed.size(); }
};

struct SolveOptions {
  std::uint64_t seed = 0;
  std::optional<Clock::time_point> deadline;
  bool validate = false;  // cross-check every incremental core update against recomputation
};

// Working state of one solver invocation: a private view over the shared
// graph with cores and strengths kept current as edges are removed.
class CollapseSession {
 public:
  CollapseSession(const Graph& graph, NodeId target, const SolveOptions& options = {})
      : options_(options),
        start_(Clock::now()),
        view_(graph),
        index_(compute_cores(view_)),
        strength_(view_, index_),
        target_(target) {
    graph.check_node(target);
    k_ = index_.core[target];
    if (k_ == 0) throw InvalidArgument("node " + graph.label(target) + " has core value 0; nothing to collapse");
    initial_strength_ = strength_(target);
    trace_.push_back(supportive_count(view_, index_, target_, k_));
  }

  CollapseSession(const CollapseSession&) = delete;
  CollapseSession& operator=(const CollapseSession&) = delete;

  const Graph& graph() const { return view_.base(); }
  GraphView& view() { return view_; }
  const GraphView& view() const { return view_; }
  CoreIndex& index() { return index_; }
  const CoreIndex& index() const { return index_; }
  StrengthCache& strength() { return strength_; }
  NodeId target() const { return target_; }
  CoreValue k() const { return k_; }
  std::uint32_t initial_strength() const { return initial_strength_; }
  const std::vector<Edge>& removed() const { return removed_; }

  bool alive() const { return index_.core[target_] >= k_; }

  CascadeReport remove(EdgeId id) {
    CascadeReport report = cascade_after_removal(view_, index_, id, options_.validate);
    strength_.invalidate(report);
    removed_.push_back(report.edge);
    trace_.push_back(supportive_count(view_, index_, target_, k_));
    return report;
  }

  CascadeReport remove(const Edge& e) {
    auto id = graph().find_edge(e);
    if (!id) throw InvalidArgument("edge " + to_string(e) + " not in graph");
    return remove(*id);
  }

  void check_deadline() const {
    if (options_.deadline && Clock::now() > *options_.deadline)
      throw Timeout("deadline exceeded collapsing node " + graph().label(target_));
  }

  CollapseResult finish(std::string method) {
    CollapseResult r;
    r.target = target_;
    r.method = std::move(method);
    r.k = k_;
    r.initial_strength = initial_strength_;
    r.removed = removed_;
    r.trace = trace_;
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return r;
  }

 private:
  SolveOptions options_;
  Clock::time_point start_;
  GraphView view_;
  CoreIndex index_;
  StrengthCache strength_;
  NodeId target_;
  CoreValue k_ = 0;
  std::uint32_t initial_strength_ = 0;
  std::vector<Edge> removed_;
  std::vector<std::uint32_t> trace_;
};

// Generator for one (seed, salt) stream; salts keep per-node streams apart.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

// Supportive neighbors of the session target ordered by (core strength, id).
inline std::vector<NodeId> weakest_supporters(CollapseSession& s) {
  auto sn = supportive_neighbors(s.view(), s.index(), s.target(), s.k());
  std::stable_sort(sn.begin(), sn.end(), [&](NodeId a, NodeId b) { return s.strength()(a) < s.strength()(b); });
  return sn;
}

// Disconnects the target from its weakest supporters in a fresh session
// until it collapses. Cutting CS supporters always suffices; a cascade from a
// weak supporter can end it sooner.
inline CollapseResult direct_disconnection(const Graph& graph, NodeId target, std::string method,
                                           const SolveOptions& options = {}) {
  CollapseSession s(graph, target, options);
  auto sn = weakest_supporters(s);
  const std::uint32_t cs = s.initial_strength();
  for (std::uint32_t j = 0; j < cs && s.alive(); ++j) s.remove(Edge::make(target, sn[j]));
  CollapseResult r = s.finish(std::move(method));
  r.budget_fallback = true;
  return r;
}

}  // namespace kcollapse
