#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcollapse/error.hpp"

namespace kcollapse {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Undirected edge in canonical form (u < v).
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge make(NodeId a, NodeId b) {
    if (a == b) throw InvalidArgument("self-loop edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
    return a < b ? Edge{a, b} : Edge{b, a};
  }

  NodeId other(NodeId x) const { return x == u ? v : u; }
  bool touches(NodeId x) const { return x == u || x == v; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

// Immutable simple undirected graph in CSR form. Neighbor lists are sorted;
// edge ids follow the lexicographic order of the canonical edges.
class Graph {
 public:
  Graph() = default;

  // Builds a graph over nodes 0..node_count-1. Self-loops and repeated or
  // reversed pairs are dropped silently. Labels default to the decimal id.
  static Graph from_edges(NodeId node_count, std::span<const std::pair<NodeId, NodeId>> pairs,
                          std::vector<std::string> labels = {}) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) {
      if (a >= node_count || b >= node_count)
        throw InvalidArgument("edge endpoint out of range: " + std::to_string(std::max(a, b)));
      if (a == b) continue;
      edges.push_back(Edge::make(a, b));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.edges_ = std::move(edges);
    g.offsets_.assign(node_count + 1, 0);
    for (const Edge& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (NodeId i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(g.offsets_.back());
    g.slot_edge_.resize(g.offsets_.back());
    std::vector<std::uint32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
      const Edge& e = g.edges_[id];
      g.targets_[fill[e.u]] = e.v;
      g.slot_edge_[fill[e.u]++] = id;
      g.targets_[fill[e.v]] = e.u;
      g.slot_edge_[fill[e.v]++] = id;
    }
    std::vector<std::pair<NodeId, EdgeId>> tmp;
    for (NodeId i = 0; i < node_count; ++i) {
      auto b = g.offsets_[i], en = g.offsets_[i + 1];
      tmp.clear();
      for (auto s = b; s < en; ++s) tmp.emplace_back(g.targets_[s], g.slot_edge_[s]);
      std::sort(tmp.begin(), tmp.end());
      for (auto s = b; s < en; ++s) std::tie(g.targets_[s], g.slot_edge_[s]) = tmp[s - b];
    }

    if (labels.empty()) {
      labels.reserve(node_count);
      for (NodeId i = 0; i < node_count; ++i) labels.push_back(std::to_string(i));
    } else if (labels.size() != node_count) {
      throw InvalidArgument("label table size does not match node count");
    }
    g.labels_ = std::move(labels);
    for (NodeId i = 0; i < node_count; ++i) g.label_index_.emplace(g.labels_[i], i);
    return g;
  }

  static Graph from_edges(NodeId node_count, std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
    std::vector<std::pair<NodeId, NodeId>> v(pairs);
    return from_edges(node_count, std::span<const std::pair<NodeId, NodeId>>(v));
  }

  NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId i) const {
    check_node(i);
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  // Edge ids parallel to neighbors(i).
  std::span<const EdgeId> incident_edges(NodeId i) const {
    check_node(i);
    return {slot_edge_.data() + offsets_[i], slot_edge_.data() + offsets_[i + 1]};
  }
  std::uint32_t degree(NodeId i) const {
    check_node(i);
    return offsets_[i + 1] - offsets_[i];
  }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const {
    if (a >= node_count() || b >= node_count() || a == b) return std::nullopt;
    auto nb = neighbors(a);
    auto it = std::lower_bound(nb.begin(), nb.end(), b);
    if (it == nb.end() || *it != b) return std::nullopt;
    return slot_edge_[offsets_[a] + static_cast<std::uint32_t>(it - nb.begin())];
  }
  std::optional<EdgeId> find_edge(const Edge& e) const { return find_edge(e.u, e.v); }

  const std::string& label(NodeId i) const {
    check_node(i);
    return labels_[i];
  }
  std::optional<NodeId> find_label(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

  void check_node(NodeId i) const {
    if (i >= node_count())
      throw InvalidArgument("node id " + std::to_string(i) + " out of range (node_count=" +
                            std::to_string(node_count()) + ")");
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<EdgeId> slot_edge_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
};

// ---------------------------------------------------------------------------
// Edge-list ingestion

struct ParseOptions {
  std::size_t skip_lines = 0;        // header lines to ignore before parsing
  bool allow_extra_columns = false;  // tolerate weight/timestamp columns after the pair
};

struct ParseStats {
  std::size_t data_lines = 0;
  std::size_t comment_lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;  // repeated or reversed pairs
};

struct ParsedGraph {
  Graph graph;
  ParseStats stats;
};

namespace detail {

inline std::optional<long long> parse_integer(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace detail

// Dense ids are assigned by sorting the original labels (numerically when
// every label is an integer), so the result does not depend on line order.
inline ParsedGraph parse_edge_list(std::istream& in, const ParseOptions& options = {}) {
  ParsedGraph out;
  std::vector<std::pair<std::string, std::string>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= options.skip_lines) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') {
      ++out.stats.comment_lines;
      continue;
    }
    std::istringstream tokens(line);
    std::string a, b, extra;
    tokens >> a >> b;
    if (b.empty()) throw ParseError("expected two tokens, got one", line_no);
    if (tokens >> extra && !options.allow_extra_columns)
      throw ParseError("expected two tokens, got more", line_no);
    ++out.stats.data_lines;
    if (a == b) {
      ++out.stats.self_loops;
      continue;
    }
    raw.emplace_back(std::move(a), std::move(b));
  }
  if (raw.empty()) throw ParseError("edge list contains no edges", 0);

  std::vector<std::string> labels;
  labels.reserve(raw.size() * 2);
  for (auto& [a, b] : raw) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  bool numeric = std::all_of(labels.begin(), labels.end(),
                             [](const std::string& s) { return detail::parse_integer(s).has_value(); });
  if (numeric) {
    std::sort(labels.begin(), labels.end(), [](const std::string& x, const std::string& y) {
      auto nx = *detail::parse_integer(x), ny = *detail::parse_integer(y);
      return nx != ny ? nx < ny : x < y;
    });
  }
  std::unordered_map<std::string, NodeId> index;
  index.reserve(labels.size());
  for (NodeId i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);

  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(raw.size());
  for (auto& [a, b] : raw) pairs.emplace_back(index.at(a), index.at(b));
  const auto n = static_cast<NodeId>(labels.size());
  out.graph = Graph::from_edges(n, std::span<const std::pair<NodeId, NodeId>>(pairs), std::move(labels));
  out.stats.duplicates = raw.size() - out.graph.edge_count();
  return out;
}

inline ParsedGraph parse_edge_list(std::string_view text, const ParseOptions& options = {}) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in, options);
}

inline ParsedGraph load_edge_list(const std::string& path, const ParseOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_edge_list(in, options);
}

// Canonical text: one "u v" pair per line with u < v, sorted. With
// `use_labels`, endpoints are printed by their original labels.
inline void write_edge_list(std::ostream& out, const Graph& g, bool use_labels = false) {
  for (const Edge& e : g.edges()) {
    if (use_labels)
      out << g.label(e.u) << ' ' << g.label(e.v) << '\n';
    else
      out << e.u << ' ' << e.v << '\n';
  }
}

inline std::string to_edge_list_text(const Graph& g, bool use_labels = false) {
  std::ostringstream out;
  write_edge_list(out, g, use_labels);
  return out.str();
}

// ---------------------------------------------------------------------------

// Deletion overlay over a shared base graph. Single owner; the base graph is
// never modified.
class GraphView {
 public:
  explicit GraphView(const Graph& base)
      : base_(&base), deleted_(base.edge_count(), 0), live_degree_(base.node_count()) {
    for (NodeId i = 0; i < base.node_count(); ++i) live_degree_[i] = base.degree(i);
  }

  const Graph& base() const { return *base_; }
  NodeId node_count() const { return base_->node_count(); }
  std::size_t live_edge_count() const { return base_->edge_count() - deleted_count_; }
  std::size_t deleted_count() const { return deleted_count_; }

  std::uint32_t live_degree(NodeId i) const {
    base_->check_node(i);
    return live_degree_[i];
  }

  bool is_live(EdgeId id) const { return !deleted_.at(id); }
  bool is_live(const Edge& e) const {
    auto id = base_->find_edge(e);
    return id && !deleted_[*id];
  }

  // Calls f(neighbor, edge_id) for each live neighbor in ascending order.
  template <class F>
  void for_each_neighbor(NodeId i, F&& f) const {
    auto nb = base_->neighbors(i);
    auto ids = base_->incident_edges(i);
    for (std::size_t s = 0; s < nb.size(); ++s)
      if (!deleted_[ids[s]]) f(nb[s], ids[s]);
  }

  std::vector<NodeId> neighbors(NodeId i) const {
    std::vector<NodeId> out;
    out.reserve(live_degree(i));
    for_each_neighbor(i, [&](NodeId j, EdgeId) { out.push_back(j); });
    return out;
  }

  EdgeId delete_edge(const Edge& e) {
    auto id = base_->find_edge(e);
    if (!id) throw InvalidArgument("edge " + to_string(e) + " not in graph");
    delete_edge(*id);
    return *id;
  }

  void delete_edge(EdgeId id) {
    if (id >= deleted_.size()) throw InvalidArgument("edge id out of range");
    if (deleted_[id]) throw InvalidArgument("edge " + to_string(base_->edge(id)) + " already deleted");
    deleted_[id] = 1;
    ++deleted_count_;
    const Edge& e = base_->edge(id);
    --live_degree_[e.u];
    --live_degree_[e.v];
  }

  // Undo of delete_edge; used by read-only probes.
  void restore_edge(EdgeId id) {
    if (id >= deleted_.size() || !deleted_[id]) throw InvalidArgument("edge is not deleted");
    deleted_[id] = 0;
    --deleted_count_;
    const Edge& e = base_->edge(id);
    ++live_degree_[e.u];
    ++live_degree_[e.v];
  }

  std::vector<Edge> deleted_edges() const {
    std::vector<Edge> out;
    out.reserve(deleted_count_);
    for (EdgeId id = 0; id < deleted_.size(); ++id)
      if (deleted_[id]) out.push_back(base_->edge(id));
    return out;
  }

 private:
  const Graph* base_;
  std::vector<char> deleted_;
  std::vector<std::uint32_t> live_degree_;
  std::size_t deleted_count_ = 0;
};

// Free-function form of GraphView::neighbors.
inline std::vector<NodeId> neighbors(const GraphView& view, NodeId i) { return view.neighbors(i); }

}  // namespace kcollapse
