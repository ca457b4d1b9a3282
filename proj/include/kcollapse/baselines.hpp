#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kcollapse/collapse.hpp"
#include "kcollapse/cores.hpp"
#include "kcollapse/metrics.hpp"

namespace kcollapse {

// Random edge deletion: uniformly random live edge until the target collapses.
inline CollapseResult red(const Graph& graph, NodeId target, const SolveOptions& options = {}) {
  CollapseSession s(graph, target, options);
  auto rng = make_rng(options.seed, target);
  std::vector<EdgeId> live(graph.edge_count());
  std::iota(live.begin(), live.end(), EdgeId{0});
  while (s.alive()) {
    s.check_deadline();
    std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
    std::size_t at = pick(rng);
    EdgeId id = live[at];
    live[at] = live.back();
    live.pop_back();
    s.remove(id);
  }
  return s.finish("red");
}

// Random neighbor disconnection: uniformly random live edge at the target.
inline CollapseResult rnd(const Graph& graph, NodeId target, const SolveOptions& options = {}) {
  CollapseSession s(graph, target, options);
  auto rng = make_rng(options.seed, target);
  auto ids = graph.incident_edges(target);
  std::vector<EdgeId> live(ids.begin(), ids.end());
  while (s.alive()) {
    s.check_deadline();
    std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
    std::size_t at = pick(rng);
    EdgeId id = live[at];
    live[at] = live.back();
    live.pop_back();
    s.remove(id);
  }
  return s.finish("rnd");
}

// Greedy k-core minimization adapted to one target: each round removes the
// candidate edge (smaller endpoint core = k) that ejects the most nodes from
// the k-core. Gives up after CS(target) removals and falls back to direct
// disconnection, so the result never exceeds the core strength.
inline CollapseResult knm(const Graph& graph, NodeId target, const SolveOptions& options = {}) {
  CollapseSession s(graph, target, options);
  while (s.alive()) {
    s.check_deadline();
    if (s.removed().size() >= s.initial_strength()) return direct_disconnection(graph, target, "knm", options);
    std::optional<EdgeId> best;
    std::size_t best_gain = 0;
    for (EdgeId id : candidate_edge_ids(s.view(), s.index(), s.k())) {
      std::size_t gain = 0;
      if (single_edge_collapse_check(s.view(), s.index(), graph.edge(id), s.strength()))
        gain = probe_removal(s.view(), s.index(), id).collapsed.size();
      if (!best || gain > best_gain) {
        best = id;
        best_gain = gain;
      }
    }
    s.remove(*best);
  }
  return s.finish("knm");
}

// ---------------------------------------------------------------------------
// Shapley-value edge ranking

struct ShapleyOptions {
  double eps2 = 0.1;
  std::optional<std::size_t> samples;  // overrides the count derived from eps2
  bool refresh = false;                // re-rank on the current view after every removal
};

// Permutation count from a Hoeffding bound with a union over the n
// candidates: ceil(ln(2n) / (2 eps^2)).
inline std::size_t shapley_sample_count(std::size_t candidates, double eps2) {
  if (candidates == 0) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log(2.0 * candidates) / (2.0 * eps2))));
}

// Per-candidate weights; `weights[j]` belongs to `candidates[j]`.
struct ShapleyTable {
  CoreValue k = 0;
  std::vector<EdgeId> candidates;
  std::vector<double> weights;
};

// Marginal gain of a candidate in a permutation = nodes it ejects from the
// k-core when removed after its predecessors. Weights average the gains over
// sampled permutations.
inline ShapleyTable shapley_table(const GraphView& view, const CoreIndex& index, CoreValue k, std::size_t samples,
                                  std::mt19937_64& rng) {
  ShapleyTable table;
  table.k = k;
  table.candidates = candidate_edge_ids(view, index, k);
  const std::size_t n = table.candidates.size();
  table.weights.assign(n, 0.0);
  if (n == 0 || samples == 0) return table;

  std::vector<std::size_t> perm(n);
  std::vector<std::uint64_t> total(n, 0);
  for (std::size_t round = 0; round < samples; ++round) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    GraphView scratch = view;
    CoreIndex cores = index;
    for (std::size_t j : perm) {
      CascadeReport r = cascade_after_removal(scratch, cores, table.candidates[j]);
      if (r.level == k) total[j] += r.collapsed.size();
    }
  }
  for (std::size_t j = 0; j < n; ++j) table.weights[j] = static_cast<double>(total[j]) / static_cast<double>(samples);
  return table;
}

inline ShapleyTable shapley_table(const Graph& graph, CoreValue k, const ShapleyOptions& options, std::uint64_t seed) {
  GraphView view(graph);
  CoreIndex index = compute_cores(view);
  auto candidates = candidate_edge_ids(view, index, k).size();
  auto rng = make_rng(seed, k);
  return shapley_table(view, index, k, options.samples.value_or(shapley_sample_count(candidates, options.eps2)), rng);
}

// Candidate ids sorted by (weight desc, id asc).
inline std::vector<EdgeId> shapley_order(const ShapleyTable& table) {
  std::vector<std::size_t> idx(table.candidates.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return table.weights[a] > table.weights[b];
  });
  std::vector<EdgeId> out;
  out.reserve(idx.size());
  for (std::size_t j : idx) out.push_back(table.candidates[j]);
  return out;
}

struct SvOptions : SolveOptions {
  ShapleyOptions shapley;
};

// Shapley-value baseline: candidates are the edges whose smaller endpoint
// core equals the target's; they are removed in descending weight until the
// target collapses, within a CS(target) budget as for knm. `precomputed`
// must come from shapley_table on the same graph and k.
inline CollapseResult sv(const Graph& graph, NodeId target, const SvOptions& options = {},
                         const ShapleyTable* precomputed = nullptr) {
  CollapseSession s(graph, target, options);
  if (precomputed && precomputed->k != s.k()) throw InvalidArgument("Shapley table built for a different k");

  if (!options.shapley.refresh) {
    ShapleyTable local;
    if (!precomputed) {
      local = shapley_table(graph, s.k(), options.shapley, options.seed);
      precomputed = &local;
    }
    for (EdgeId id : shapley_order(*precomputed)) {
      if (!s.alive()) break;
      s.check_deadline();
      if (s.removed().size() >= s.initial_strength()) return direct_disconnection(graph, target, "sv", options);
      s.remove(id);
    }
  } else {
    auto rng = make_rng(options.seed, s.k());
    while (s.alive()) {
      s.check_deadline();
      if (s.removed().size() >= s.initial_strength()) return direct_disconnection(graph, target, "sv", options);
      auto n = candidate_edge_ids(s.view(), s.index(), s.k()).size();
      auto table = shapley_table(s.view(), s.index(), s.k(),
                                 options.shapley.samples.value_or(shapley_sample_count(n, options.shapley.eps2)), rng);
      s.remove(shapley_order(table).front());
    }
  }
  if (s.alive()) return direct_disconnection(graph, target, "sv", options);
  return s.finish("sv");
}

}  // namespace kcollapse
