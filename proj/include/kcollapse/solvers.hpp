#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

#include "kcollapse/collapse.hpp"
#include "kcollapse/impact.hpp"
#include "kcollapse/metrics.hpp"

namespace kcollapse {

namespace detail {

struct ScoredPedigree {
  NodeId representative = 0;
  std::uint32_t followed = 0;
  std::uint32_t influenced = 0;
  CoronaPedigree pedigree;
};

// Scores one representative per pedigree among `seeds` (ascending) and
// returns the best by (followed desc, influenced desc, id asc).
inline std::optional<ScoredPedigree> best_pedigree(CollapseSession& s, const std::vector<NodeId>& seeds) {
  std::optional<ScoredPedigree> best;
  std::unordered_set<NodeId> covered;
  for (NodeId u : seeds) {
    if (covered.count(u)) continue;
    ImpactReport impact = calculate_impact(s.view(), s.index(), s.target(), u, s.strength());
    CoronaPedigree p = corona_pedigree(s.view(), s.index(), u, s.strength());
    covered.insert(p.members.begin(), p.members.end());
    bool better = !best || impact.followed_in_nbhd > best->followed ||
                  (impact.followed_in_nbhd == best->followed && impact.influenced_in_nbhd > best->influenced);
    if (better) best = ScoredPedigree{u, impact.followed_in_nbhd, impact.influenced_in_nbhd, std::move(p)};
  }
  return best;
}

}  // namespace detail

// Targeted node collapse over all corona pedigrees of the target's core.
// Each round removes one supportive edge of the pedigree whose collapse is
// predicted to take the most target neighbors with it; when no pedigree
// reaches the target, the target is cut from its weakest supporter.
inline CollapseResult tnc(const Graph& graph, NodeId target, const SolveOptions& options = {}) {
  CollapseSession s(graph, target, options);
  while (s.alive()) {
    s.check_deadline();
    auto coronas = corona_nodes(s.view(), s.index(), s.k(), s.strength());
    auto best = detail::best_pedigree(s, coronas);
    if (!best || best->followed == 0) {
      NodeId m = weakest_supporters(s).front();
      s.remove(Edge::make(target, m));
    } else {
      s.remove(best->pedigree.incident_edges.front());
    }
  }
  return s.finish("tnc");
}

enum class SampleMode { LowestStrength, Random };

struct AtncOptions : SolveOptions {
  SampleMode sample = SampleMode::LowestStrength;
};

// Adjacent variant: only corona neighbors of the target are candidates and
// the chosen one is cut from the target directly. If candidates run out
// first, CS(target) supporters are disconnected in one batch.
inline CollapseResult atnc(const Graph& graph, NodeId target, const AtncOptions& options = {}) {
  CollapseSession s(graph, target, options);
  auto corona_neighbors = [&] {
    std::vector<NodeId> out;
    const CoreValue c = s.index().core[target];
    s.view().for_each_neighbor(target, [&](NodeId j, EdgeId) {
      if (s.index().core[j] == c && s.strength()(j) == 1) out.push_back(j);
    });
    return out;
  };

  auto candidates = corona_neighbors();
  while (!candidates.empty() && s.alive()) {
    s.check_deadline();
    auto best = detail::best_pedigree(s, candidates);
    s.remove(Edge::make(target, best->representative));
    candidates = corona_neighbors();
  }

  if (s.alive()) {
    std::vector<NodeId> picked;
    const std::uint32_t budget = s.strength()(target);
    if (options.sample == SampleMode::Random) {
      picked = supportive_neighbors(s.view(), s.index(), target, s.k());
      auto rng = make_rng(options.seed, target);
      std::shuffle(picked.begin(), picked.end(), rng);
    } else {
      picked = weakest_supporters(s);
    }
    picked.resize(budget);
    for (NodeId j : picked) s.remove(Edge::make(target, j));
  }
  return s.finish("atnc");
}

}  // namespace kcollapse
