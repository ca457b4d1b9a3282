#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kcollapse/eval.hpp"
#include "kcollapse/impact.hpp"

// JSON documents carry a top-level "schema_version"; CSV headers are fixed.
namespace kcollapse::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline json edge_json(const Graph& g, const Edge& e) { return json::array({g.label(e.u), g.label(e.v)}); }

inline json to_json(const Graph& g, const CollapseResult& r, bool timing = true) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = r.method;
  j["target"] = g.label(r.target);
  j["core_value"] = r.k;
  j["core_strength"] = r.initial_strength;
  j["nr"] = r.nr();
  j["budget_fallback"] = r.budget_fallback;
  j["removed"] = json::array();
  for (const Edge& e : r.removed) j["removed"].push_back(edge_json(g, e));
  j["trace"] = r.trace;
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline json to_json(const Graph& g, const ImpactReport& r, NodeId target, NodeId seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["target"] = g.label(target);
  j["seed"] = g.label(seed);
  j["followed_in_nbhd"] = r.followed_in_nbhd;
  j["influenced_in_nbhd"] = r.influenced_in_nbhd;
  j["followed"] = json::array();
  for (NodeId x : r.followed) j["followed"].push_back(g.label(x));
  j["influenced"] = json::array();
  for (NodeId x : r.influenced) j["influenced"].push_back(g.label(x));
  return j;
}

inline json to_json(const Graph& g, const CaseTrace& t) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = t.method;
  j["target"] = g.label(t.target);
  j["critical"] = t.critical;
  j["points"] = json::array();
  for (const TracePoint& p : t.points) j["points"].push_back({{"edges_removed", p.edges_removed}, {"supportive", p.supportive}});
  return j;
}

inline json to_json(const Aggregates& a) {
  return {{"nbn", a.nbn}, {"src", a.src}, {"war", a.war}, {"rp", a.rp},
          {"total_cs", a.total_cs}, {"incomplete", a.incomplete}};
}

inline json to_json(const MetricsReport& r, bool timing = true) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = r.method;
  j["runs"] = r.runs;
  j["seeds"] = r.seeds;
  j["aggregates"] = to_json(r.aggregates);
  j["rows"] = json::array();
  for (const NodeRow& row : r.rows) {
    json x;
    x["label"] = row.label;
    x["core_value"] = row.core;
    x["core_strength"] = row.cs;
    x["nr"] = row.nr();
    x["rc"] = row.rc();
    x["runs"] = row.runs;
    x["nr_sum"] = row.nr_sum;
    x["bubble"] = row.bubble();
    x["complete"] = row.complete;
    if (timing) x["seconds"] = row.seconds;
    j["rows"].push_back(std::move(x));
  }
  if (timing) j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

inline json to_json(const ResilienceSummary& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["method"] = s.method;
  j["cs_total"] = s.cs_total;
  j["nr_total"] = s.nr_total;
  j["src"] = s.src;
  j["redundancy"] = s.redundancy;
  j["levels"] = json::array();
  for (const LevelSummary& l : s.levels) {
    json x{{"k", l.k}, {"nodes", l.nodes}, {"bubbles", l.bubbles}, {"cs_total", l.cs_total}, {"nr_total", l.nr_total}};
    x["cs_histogram"] = json::object();
    for (auto [v, c] : l.cs_histogram) x["cs_histogram"][std::to_string(v)] = c;
    x["nr_histogram"] = json::object();
    for (auto [v, c] : l.nr_histogram) x["nr_histogram"][format_double(v)] = c;
    j["levels"].push_back(std::move(x));
  }
  return j;
}

// Reads a report written by to_json; aggregates are recomputed from rows.
inline MetricsReport report_from_json(const json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) throw ParseError("unsupported report schema_version", 0);
  MetricsReport r;
  r.method = j.at("method").get<std::string>();
  r.runs = j.at("runs").get<std::uint32_t>();
  r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  for (const json& x : j.at("rows")) {
    NodeRow row;
    row.label = x.at("label").get<std::string>();
    row.core = x.at("core_value").get<CoreValue>();
    row.cs = x.at("core_strength").get<std::uint32_t>();
    row.runs = x.at("runs").get<std::uint32_t>();
    row.nr_sum = x.at("nr_sum").get<std::uint64_t>();
    row.complete = x.at("complete").get<bool>();
    row.seconds = x.value("seconds", 0.0);
    r.rows.push_back(std::move(row));
  }
  r.aggregates = aggregate(r.rows);
  r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_cores_csv(std::ostream& out, const Graph& g, const CoreIndex& index) {
  out << "node_label,core_value\n";
  for (NodeId i = 0; i < g.node_count(); ++i) out << g.label(i) << ',' << index.core[i] << '\n';
}

inline void write_metrics_csv(std::ostream& out, const GraphView& view, const CoreIndex& index) {
  const Graph& g = view.base();
  out << "node_label,core_value,core_strength,is_corona\n";
  for (NodeId i = 0; i < g.node_count(); ++i) {
    const CoreValue c = index.core[i];
    const std::uint32_t cs = c ? core_strength(view, index, i) : 0;
    out << g.label(i) << ',' << c << ',' << cs << ',' << (c >= 1 && cs == 1 ? 1 : 0) << '\n';
  }
}

inline constexpr const char* kReportCsvHeader =
    "method,node_label,core_value,core_strength,nr,rc,runs,nr_sum,bubble,complete";

inline void write_report_csv(std::ostream& out, const MetricsReport& r) {
  out << kReportCsvHeader << '\n';
  for (const NodeRow& row : r.rows)
    out << r.method << ',' << row.label << ',' << row.core << ',' << row.cs << ',' << format_double(row.nr()) << ','
        << format_double(row.rc()) << ',' << row.runs << ',' << row.nr_sum << ',' << (row.bubble() ? 1 : 0) << ','
        << (row.complete ? 1 : 0) << '\n';
}

inline MetricsReport report_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader) throw ParseError("unexpected report CSV header", 1);
  MetricsReport r;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw ParseError("expected 10 report columns", line_no);
    try {
      r.method = f[0];
      NodeRow row;
      row.label = f[1];
      row.core = static_cast<CoreValue>(std::stoul(f[2]));
      row.cs = static_cast<std::uint32_t>(std::stoul(f[3]));
      row.runs = static_cast<std::uint32_t>(std::stoul(f[6]));
      row.nr_sum = std::stoull(f[7]);
      row.complete = f[9] == "1";
      r.runs = row.runs ? row.runs : r.runs;
      r.rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ParseError("malformed number in report row", line_no);
    }
  }
  r.aggregates = aggregate(r.rows);
  return r;
}

inline void write_compare_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "method,NBN,SRC,WAR,RP\n";
  for (const MetricsReport& r : reports)
    out << r.method << ',' << r.aggregates.nbn << ',' << format_double(r.aggregates.src) << ','
        << format_double(r.aggregates.war) << ',' << format_double(r.aggregates.rp) << '\n';
}

}  // namespace kcollapse::io
