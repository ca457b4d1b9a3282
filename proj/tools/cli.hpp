#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcollapse/io.hpp"
#include "kcollapse/kcollapse.hpp"

namespace kcollapse::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

struct UsageError : Error {
  using Error::Error;
};

struct Settings {
  std::string graph_path;
  std::string format;  // empty: per-subcommand default
  std::string out;
  std::uint64_t seed = 0;
  std::uint32_t runs = 0;
  std::optional<unsigned> threads;
  double eps2 = 0.1;
  std::optional<std::size_t> sv_samples;
  bool sv_refresh = false;
  double timeout_secs = 60.0;
  std::string candidate_mode = "reduced";
  std::uint32_t size_cap = 4;
  std::uint64_t budget = 10'000'000;
  std::string method;
  std::string target;
  std::string impact_seed;
  std::string sample = "random";
  std::size_t skip_lines = 0;
  bool allow_extra_columns = false;
  bool no_timing = false;
  bool mismatches_only = false;
  std::string summary_path;
  std::vector<std::string> reports;
};

inline unsigned thread_count(const Settings& s) {
  if (s.threads) return *s.threads;
  if (const char* env = std::getenv("KCOLLAPSE_THREADS")) {
    auto n = detail::parse_integer(env);
    if (!n || *n < 0) throw UsageError(std::string("KCOLLAPSE_THREADS must be a non-negative integer, got '") + env + "'");
    return static_cast<unsigned>(*n);
  }
  return 0;
}

inline ParsedGraph read_graph(const Settings& s) {
  if (!std::filesystem::is_regular_file(s.graph_path)) throw UsageError("cannot open graph file '" + s.graph_path + "'");
  ParseOptions opts;
  opts.skip_lines = s.skip_lines;
  opts.allow_extra_columns = s.allow_extra_columns;
  return load_edge_list(s.graph_path, opts);
}

inline NodeId resolve_label(const Graph& g, const std::string& label, const char* what) {
  if (auto id = g.find_label(label)) return *id;
  throw UsageError(std::string("unknown ") + what + " '" + label + "'");
}

inline Method resolve_method(const std::string& name) {
  if (auto m = parse_method(name)) return *m;
  throw UsageError("unknown method '" + name + "'");
}

inline MethodConfig method_config(const Settings& s) {
  MethodConfig c;
  c.shapley.eps2 = s.eps2;
  c.shapley.samples = s.sv_samples;
  c.shapley.refresh = s.sv_refresh;
  c.atnc_sample = s.sample == "lowest" ? SampleMode::LowestStrength : SampleMode::Random;
  return c;
}

inline std::string output_format(const Settings& s, const std::string& fallback) {
  if (!s.format.empty()) return s.format;
  if (s.out.ends_with(".csv")) return "csv";
  if (s.out.ends_with(".json")) return "json";
  return fallback;
}

// Writes to --out when given, otherwise to `out`.
template <class Body>
void emit(const Settings& s, std::ostream& out, Body&& body) {
  if (s.out.empty()) {
    body(out);
    return;
  }
  std::ofstream file(s.out, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + s.out + "'");
  body(file);
}

inline void print_json(std::ostream& out, const io::json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// Subcommands

inline void cmd_decompose(const Settings& s, std::ostream& out) {
  const Graph g = read_graph(s).graph;
  const CoreIndex index = compute_cores(GraphView(g));
  emit(s, out, [&](std::ostream& o) {
    if (output_format(s, "csv") == "csv") return io::write_cores_csv(o, g, index);
    io::json j{{"schema_version", io::kSchemaVersion}, {"max_core", index.max_core}, {"nodes", io::json::array()}};
    for (NodeId i = 0; i < g.node_count(); ++i) j["nodes"].push_back({{"label", g.label(i)}, {"core_value", index.core[i]}});
    print_json(o, j);
  });
}

inline void cmd_metrics(const Settings& s, std::ostream& out) {
  const Graph g = read_graph(s).graph;
  const GraphView view(g);
  const CoreIndex index = compute_cores(view);
  emit(s, out, [&](std::ostream& o) {
    if (output_format(s, "csv") == "csv") return io::write_metrics_csv(o, view, index);
    io::json j{{"schema_version", io::kSchemaVersion}, {"nodes", io::json::array()}};
    for (NodeId i = 0; i < g.node_count(); ++i) {
      const CoreValue c = index.core[i];
      const std::uint32_t cs = c ? core_strength(view, index, i) : 0;
      j["nodes"].push_back({{"label", g.label(i)}, {"core_value", c}, {"core_strength", cs}, {"is_corona", c && cs == 1}});
    }
    print_json(o, j);
  });
}

inline void cmd_collapse(const Settings& s, std::ostream& out) {
  const Method m = resolve_method(s.method);
  const Graph g = read_graph(s).graph;
  const NodeId target = resolve_label(g, s.target, "target");
  const CollapseResult r = run_method(m, g, target, s.seed, method_config(s));
  emit(s, out, [&](std::ostream& o) {
    if (output_format(s, "json") == "json") return print_json(o, io::to_json(g, r, !s.no_timing));
    o << "step,edge_u,edge_v,supportive\n";
    o << 0 << ",,," << r.trace.front() << '\n';
    for (std::size_t j = 0; j < r.removed.size(); ++j)
      o << j + 1 << ',' << g.label(r.removed[j].u) << ',' << g.label(r.removed[j].v) << ',' << r.trace[j + 1] << '\n';
  });
}

inline void cmd_trace(const Settings& s, std::ostream& out) {
  const Graph g = read_graph(s).graph;
  const NodeId target = resolve_label(g, s.target, "target");
  if (!s.impact_seed.empty()) {
    const NodeId seed = resolve_label(g, s.impact_seed, "impact seed");
    const GraphView view(g);
    const CoreIndex index = compute_cores(view);
    const ImpactReport r = calculate_impact(view, index, target, seed);
    return emit(s, out, [&](std::ostream& o) { print_json(o, io::to_json(g, r, target, seed)); });
  }
  const Method m = resolve_method(s.method);
  const CaseTrace t = case_trace(run_method(m, g, target, s.seed, method_config(s)));
  emit(s, out, [&](std::ostream& o) {
    if (output_format(s, "json") == "json") return print_json(o, io::to_json(g, t));
    o << "edges_removed,supportive,critical\n";
    for (const TracePoint& p : t.points) o << p.edges_removed << ',' << p.supportive << ',' << t.critical << '\n';
  });
}

inline void cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
  const Method m = resolve_method(s.method);
  const Graph g = read_graph(s).graph;
  SweepOptions opts;
  opts.runs = s.runs;
  opts.seed = s.seed;
  opts.threads = thread_count(s);
  opts.timeout_secs = s.timeout_secs > 0 ? std::optional<double>(s.timeout_secs) : std::nullopt;
  opts.config = method_config(s);
  std::mutex progress_mutex;
  opts.progress = [&](std::size_t done, std::size_t total) {
    if (done % 50 != 0 && done != total) return;
    std::lock_guard lock(progress_mutex);
    err << "[" << method_name(m) << "] " << done << "/" << total << " nodes\n";
  };
  const MetricsReport report = sweep(g, m, opts);
  const Aggregates& a = report.aggregates;
  err << "[" << report.method << "] NBN=" << a.nbn << " SRC=" << io::format_double(a.src)
      << " WAR=" << io::format_double(a.war) << " RP=" << io::format_double(a.rp) << "%";
  if (a.incomplete) err << " (" << a.incomplete << " nodes timed out and were excluded)";
  err << '\n';
  emit(s, out, [&](std::ostream& o) {
    if (output_format(s, "json") == "json") return print_json(o, io::to_json(report, !s.no_timing));
    io::write_report_csv(o, report);
  });
  if (!s.summary_path.empty()) {
    std::ofstream file(s.summary_path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + s.summary_path + "'");
    print_json(file, io::to_json(resilience_summary(report)));
  }
}

inline void cmd_compare(const Settings& s, std::ostream& out) {
  std::vector<MetricsReport> reports;
  for (const std::string& path : s.reports) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open report '" + path + "'");
    in >> std::ws;
    if (in.peek() == '{') {
      io::json j;
      try {
        j = io::json::parse(in);
        reports.push_back(io::report_from_json(j));
      } catch (const io::json::exception& e) {
        throw ParseError(path + ": " + e.what(), 0);
      }
    } else {
      reports.push_back(io::report_from_csv(in));
    }
  }
  emit(s, out, [&](std::ostream& o) {
    if (output_format(s, "csv") == "csv") return io::write_compare_csv(o, reports);
    io::json j{{"schema_version", io::kSchemaVersion}, {"methods", io::json::array()}};
    for (const MetricsReport& r : reports) {
      io::json x = io::to_json(r.aggregates);
      x["method"] = r.method;
      j["methods"].push_back(std::move(x));
    }
    print_json(o, j);
  });
}

// One row per node with C >= 1: method NR against exact NR. "ok" means equal,
// "above" means the method used more removals than necessary, "below" would
// indicate a bug, and "infeasible" means the oracle exceeded its limits.
inline void cmd_oracle_check(const Settings& s, std::ostream& out, std::ostream& err) {
  const Method m = resolve_method(s.method);
  const Graph g = read_graph(s).graph;
  const CoreIndex index = compute_cores(GraphView(g));
  OracleOptions oracle;
  oracle.mode = s.candidate_mode == "full" ? CandidateMode::Full : CandidateMode::Reduced;
  oracle.size_cap = s.size_cap;
  oracle.budget = s.budget;

  struct Row {
    NodeId node;
    std::uint32_t cs = 0;
    double method_nr = 0;
    std::optional<std::size_t> oracle_nr;
    std::string status;
  };
  std::vector<Row> rows;
  for (NodeId i = 0; i < g.node_count(); ++i)
    if (index.core[i] >= 1) rows.push_back({i});

  const MethodConfig config = method_config(s);
  const std::uint32_t runs = is_randomized(m) ? (s.runs ? s.runs : 10) : 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < rows.size(); t = next++) {
      Row& row = rows[t];
      row.cs = core_strength(GraphView(g), index, row.node);
      std::uint64_t sum = 0;
      for (std::uint32_t r = 0; r < runs; ++r) sum += run_method(m, g, row.node, s.seed + r, config).nr();
      row.method_nr = static_cast<double>(sum) / runs;
      try {
        row.oracle_nr = exact_nr(g, row.node, oracle).nr();
        const double o = static_cast<double>(*row.oracle_nr);
        row.status = row.method_nr == o ? "ok" : row.method_nr > o ? "above" : "below";
      } catch (const OracleInfeasible&) {
        row.status = "infeasible";
      }
    }
  };
  unsigned threads = thread_count(s);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads && t < rows.size(); ++t) pool.emplace_back(worker);
    worker();
  }

  std::size_t mismatches = 0, infeasible = 0;
  for (const Row& r : rows) {
    mismatches += r.status == "above" || r.status == "below";
    infeasible += r.status == "infeasible";
  }
  err << "[oracle-check " << method_name(m) << "] " << rows.size() << " nodes, " << mismatches << " mismatches, "
      << infeasible << " infeasible\n";
  emit(s, out, [&](std::ostream& o) {
    const bool csv = output_format(s, "csv") == "csv";
    io::json j{{"schema_version", io::kSchemaVersion}, {"method", method_name(m)}, {"rows", io::json::array()}};
    if (csv) o << "node_label,core_value,core_strength,method_nr,oracle_nr,status\n";
    for (const Row& r : rows) {
      if (s.mismatches_only && r.status == "ok") continue;
      const std::string label = g.label(r.node);
      if (csv) {
        o << label << ',' << index.core[r.node] << ',' << r.cs << ',' << io::format_double(r.method_nr) << ','
          << (r.oracle_nr ? std::to_string(*r.oracle_nr) : "") << ',' << r.status << '\n';
      } else {
        io::json x{{"label", label}, {"core_value", index.core[r.node]}, {"core_strength", r.cs},
                   {"method_nr", r.method_nr}, {"oracle_nr", nullptr}, {"status", r.status}};
        if (r.oracle_nr) x["oracle_nr"] = *r.oracle_nr;
        j["rows"].push_back(std::move(x));
      }
    }
    if (!csv) print_json(o, j);
  });
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-core collapse toolkit: core decomposition, targeted collapse solvers and resilience metrics",
               "kcollapse"};
  app.require_subcommand(1);
  Settings s;

  const std::vector<std::string> method_names{"red", "rnd", "knm", "sv", "tnc", "atnc"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", s.out, "Write output to this file instead of standard output");
    sub->add_option("--seed", s.seed, "Base random seed");
    sub->add_option("--threads", s.threads, "Worker threads (default: KCOLLAPSE_THREADS or all cores)");
  };
  auto graph_input = [&](CLI::App* sub) {
    sub->add_option("graph", s.graph_path, "Edge-list file")->required();
    sub->add_option("--skip-lines", s.skip_lines, "Ignore this many leading lines");
    sub->add_flag("--allow-extra-columns", s.allow_extra_columns, "Ignore columns after the first two");
  };
  auto method_opts = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--method", s.method, "Method")->check(CLI::IsMember(method_names));
    if (required) opt->required();
    sub->add_option("--eps2", s.eps2, "Shapley sampling accuracy eps^2")->check(CLI::PositiveNumber);
    sub->add_option("--sv-samples", s.sv_samples, "Fixed number of Shapley permutations");
    sub->add_flag("--sv-refresh", s.sv_refresh, "Recompute Shapley weights after every removal");
    sub->add_option("--sample", s.sample, "ATNC fallback sampling")->check(CLI::IsMember({"random", "lowest"}));
  };

  auto* decompose = app.add_subcommand("decompose", "Core value of every node");
  common(decompose);
  graph_input(decompose);

  auto* metrics = app.add_subcommand("metrics", "Core value, core strength and corona flag of every node");
  common(metrics);
  graph_input(metrics);

  auto* collapse = app.add_subcommand("collapse", "Collapse one target node with a method");
  common(collapse);
  graph_input(collapse);
  method_opts(collapse, true);
  collapse->add_option("--target", s.target, "Target node label")->required();
  collapse->add_flag("--no-timing", s.no_timing, "Omit timing fields");

  auto* trace = app.add_subcommand("trace", "Supportive-neighbor count after each removal");
  common(trace);
  graph_input(trace);
  method_opts(trace, false);
  trace->add_option("--target", s.target, "Target node label")->required();
  trace->add_option("--impact-seed", s.impact_seed, "Dump followed/influenced sets for this corona seed instead");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a method on every node and report NBN/SRC/WAR/RP");
  common(sweep_cmd);
  graph_input(sweep_cmd);
  method_opts(sweep_cmd, true);
  sweep_cmd->add_option("--runs", s.runs, "Runs per node for red/rnd (default 10)");
  sweep_cmd->add_option("--timeout-secs", s.timeout_secs, "Per-node time limit; 0 disables");
  sweep_cmd->add_flag("--no-timing", s.no_timing, "Omit timing fields");
  sweep_cmd->add_option("--summary", s.summary_path, "Also write a CS/NR resilience summary (JSON)");

  auto* compare = app.add_subcommand("compare", "Merge sweep reports into one table");
  common(compare);
  compare->add_option("reports", s.reports, "Report files (JSON or CSV)")->required();

  auto* oracle = app.add_subcommand("oracle-check", "Compare a method against exact NR on a small graph");
  common(oracle);
  graph_input(oracle);
  method_opts(oracle, true);
  oracle->add_option("--runs", s.runs, "Runs per node for red/rnd (default 10)");
  oracle->add_option("--candidate-mode", s.candidate_mode, "Oracle candidate edges")
      ->check(CLI::IsMember({"reduced", "full"}));
  oracle->add_option("--size-cap", s.size_cap, "Largest removal set the oracle tries");
  oracle->add_option("--budget", s.budget, "Oracle subset-evaluation budget");
  oracle->add_flag("--mismatches-only", s.mismatches_only, "Only list rows where the method is not optimal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
    return kUsage;
  }

  try {
    thread_count(s);  // validate the environment early
    if (decompose->parsed()) cmd_decompose(s, out);
    else if (metrics->parsed()) cmd_metrics(s, out);
    else if (collapse->parsed()) cmd_collapse(s, out);
    else if (trace->parsed()) {
      if (s.impact_seed.empty() && s.method.empty()) throw UsageError("trace needs --method or --impact-seed");
      cmd_trace(s, out);
    } else if (sweep_cmd->parsed()) cmd_sweep(s, out, err);
    else if (compare->parsed()) cmd_compare(s, out);
    else if (oracle->parsed()) cmd_oracle_check(s, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}

}  // namespace kcollapse::cli
