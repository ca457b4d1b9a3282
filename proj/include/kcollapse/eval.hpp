#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "kcollapse/baselines.hpp"
#include "kcollapse/collapse.hpp"
#include "kcollapse/error.hpp"
#include "kcollapse/oracle.hpp"
#include "kcollapse/solvers.hpp"

namespace kcollapse {

enum class Method { Red, Rnd, Knm, Sv, Tnc, Atnc };

inline constexpr Method kAllMethods[] = {Method::Red, Method::Rnd, Method::Knm,
                                         Method::Sv,  Method::Tnc, Method::Atnc};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::Red: return "red";
    case Method::Rnd: return "rnd";
    case Method::Knm: return "knm";
    case Method::Sv: return "sv";
    case Method::Tnc: return "tnc";
    case Method::Atnc: return "atnc";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  return std::nullopt;
}

inline bool is_randomized(Method m) { return m == Method::Red || m == Method::Rnd; }

struct MethodConfig {
  ShapleyOptions shapley;
  SampleMode atnc_sample = SampleMode::Random;
  bool validate = false;
};

// Runs one method on one target. `sv_table` is optional for Method::Sv.
inline CollapseResult run_method(Method m, const Graph& graph, NodeId target, std::uint64_t seed,
                                 const MethodConfig& config = {}, std::optional<Clock::time_point> deadline = {},
                                 const ShapleyTable* sv_table = nullptr) {
  SolveOptions base;
  base.seed = seed;
  base.deadline = deadline;
  base.validate = config.validate;
  switch (m) {
    case Method::Red: return red(graph, target, base);
    case Method::Rnd: return rnd(graph, target, base);
    case Method::Knm: return knm(graph, target, base);
    case Method::Sv: {
      SvOptions o;
      static_cast<SolveOptions&>(o) = base;
      o.shapley = config.shapley;
      return sv(graph, target, o, sv_table);
    }
    case Method::Tnc: return tnc(graph, target, base);
    case Method::Atnc: {
      AtncOptions o;
      static_cast<SolveOptions&>(o) = base;
      o.sample = config.atnc_sample;
      return atnc(graph, target, o);
    }
  }
  throw InvalidArgument("unknown method");
}

// ---------------------------------------------------------------------------
// Metric suite

// Inverse-frequency weighted average of the distinct reduced costs: each
// distinct value r is weighted by 1/p_r where p_r is its share of the
// multiset. Zero for an empty multiset.
inline double war(std::span<const double> reduced_costs) {
  if (reduced_costs.empty()) return 0.0;
  std::map<double, std::size_t> counts;
  for (double r : reduced_costs) ++counts[r];
  const double total = static_cast<double>(reduced_costs.size());
  double num = 0.0, den = 0.0;
  for (auto [r, c] : counts) {
    const double inv_p = total / static_cast<double>(c);
    num += inv_p * r;
    den += inv_p;
  }
  return num / den;
}

// One node's outcome under a method. NR is kept as an exact sum over runs so
// that averaged values compare without rounding.
struct NodeRow {
  NodeId node = 0;
  std::string label;
  CoreValue core = 0;
  std::uint32_t cs = 0;
  std::uint64_t nr_sum = 0;
  std::uint32_t runs = 0;
  bool complete = true;
  double seconds = 0.0;

  double nr() const { return runs ? static_cast<double>(nr_sum) / runs : 0.0; }
  // (CS - NR) * runs, exact.
  std::int64_t rc_scaled() const { return static_cast<std::int64_t>(cs) * runs - static_cast<std::int64_t>(nr_sum); }
  double rc() const { return runs ? static_cast<double>(rc_scaled()) / runs : 0.0; }
  bool bubble() const { return complete && rc_scaled() > 0; }
};

struct Aggregates {
  std::size_t nbn = 0;
  double src = 0.0;
  double war = 0.0;
  double rp = 0.0;  // percent
  std::uint64_t total_cs = 0;
  std::size_t incomplete = 0;

  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

inline Aggregates aggregate(std::span<const NodeRow> rows) {
  Aggregates a;
  std::vector<double> rcs;
  for (const NodeRow& row : rows) {
    if (!row.complete) {
      ++a.incomplete;
      continue;
    }
    a.total_cs += row.cs;
    if (row.bubble()) {
      ++a.nbn;
      rcs.push_back(row.rc());
      a.src += row.rc();
    }
  }
  a.war = war(rcs);
  a.rp = a.total_cs ? a.src / static_cast<double>(a.total_cs) * 100.0 : 0.0;
  return a;
}

struct MetricsReport {
  std::string method;
  std::uint32_t runs = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<NodeRow> rows;
  Aggregates aggregates;
  double elapsed_seconds = 0.0;
};

struct SweepOptions {
  std::uint32_t runs = 0;  // 0: 10 for red/rnd, 1 otherwise
  std::uint64_t seed = 0;  // run r uses seed + r
  unsigned threads = 0;    // 0: hardware concurrency
  std::optional<double> timeout_secs = 60.0;
  MethodConfig config;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// Applies a method to every node with core value >= 1, each on a fresh view.
inline MetricsReport sweep(const Graph& graph, Method method, const SweepOptions& options = {}) {
  const auto start = Clock::now();
  MetricsReport report;
  report.method = std::string(method_name(method));
  report.runs = is_randomized(method) ? (options.runs ? options.runs : 10) : 1;
  for (std::uint32_t r = 0; r < report.runs; ++r) report.seeds.push_back(options.seed + r);

  GraphView view(graph);
  const CoreIndex index = compute_cores(view);
  std::vector<NodeId> targets;
  for (NodeId i = 0; i < graph.node_count(); ++i)
    if (index.core[i] >= 1) targets.push_back(i);

  // Shapley weights depend only on k; build each table once.
  std::map<CoreValue, ShapleyTable> sv_tables;
  if (method == Method::Sv && !options.config.shapley.refresh) {
    for (NodeId i : targets) sv_tables.try_emplace(index.core[i]);
    for (auto& [k, table] : sv_tables) table = shapley_table(graph, k, options.config.shapley, options.seed);
  }

  report.rows.resize(targets.size());
  std::atomic<std::size_t> next{0}, done{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < targets.size(); t = next++) {
      const NodeId i = targets[t];
      NodeRow& row = report.rows[t];
      row.node = i;
      row.label = graph.label(i);
      row.core = index.core[i];
      row.cs = detail::raw_strength(view, index, i);
      const auto node_start = Clock::now();
      std::optional<Clock::time_point> deadline;
      if (options.timeout_secs)
        deadline = node_start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(*options.timeout_secs));
      const ShapleyTable* table = nullptr;
      if (auto it = sv_tables.find(row.core); it != sv_tables.end()) table = &it->second;
      try {
        for (std::uint64_t seed : report.seeds) {
          row.nr_sum += run_method(method, graph, i, seed, options.config, deadline, table).nr();
          ++row.runs;
        }
      } catch (const Timeout&) {
        row.complete = false;
      }
      row.seconds = std::chrono::duration<double>(Clock::now() - node_start).count();
      std::size_t d = ++done;
      if (options.progress) options.progress(d, targets.size());
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, targets.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  report.aggregates = aggregate(report.rows);
  report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------
// Case-study traces

struct TracePoint {
  std::size_t edges_removed = 0;
  std::uint32_t supportive = 0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct CaseTrace {
  NodeId target = 0;
  std::string method;
  CoreValue critical = 0;  // the target collapses once the count drops below this
  std::vector<TracePoint> points;
};

inline CaseTrace case_trace(const CollapseResult& result) {
  CaseTrace t{result.target, result.method, result.k, {}};
  for (std::size_t j = 0; j < result.trace.size(); ++j) t.points.push_back({j, result.trace[j]});
  return t;
}

// ---------------------------------------------------------------------------
// Core strength versus node robustness

struct LevelSummary {
  CoreValue k = 0;
  std::size_t nodes = 0;
  std::size_t bubbles = 0;
  std::uint64_t cs_total = 0;
  double nr_total = 0.0;
  std::map<std::uint32_t, std::size_t> cs_histogram;
  std::map<double, std::size_t> nr_histogram;
};

struct ResilienceSummary {
  std::string method;
  std::vector<LevelSummary> levels;  // ascending k
  std::uint64_t cs_total = 0;
  double nr_total = 0.0;
  double src = 0.0;
  double redundancy = 0.0;  // SRC / total CS
};

inline ResilienceSummary resilience_summary(const MetricsReport& report) {
  ResilienceSummary s;
  s.method = report.method;
  std::map<CoreValue, LevelSummary> levels;
  for (const NodeRow& row : report.rows) {
    if (!row.complete) continue;
    LevelSummary& l = levels[row.core];
    l.k = row.core;
    ++l.nodes;
    l.bubbles += row.bubble();
    l.cs_total += row.cs;
    l.nr_total += row.nr();
    ++l.cs_histogram[row.cs];
    ++l.nr_histogram[row.nr()];
    s.cs_total += row.cs;
    s.nr_total += row.nr();
  }
  for (auto& [k, l] : levels) s.levels.push_back(std::move(l));
  s.src = report.aggregates.src;
  s.redundancy = s.cs_total ? s.src / static_cast<double>(s.cs_total) : 0.0;
  return s;
}

}  // namespace kcollapse
