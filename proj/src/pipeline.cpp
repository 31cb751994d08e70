#include "compact_map/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "compact_map/error.hpp"

namespace compact_map {

Mapper replay(const MapperConfig& cfg, const EventStream& events) {
  Mapper mapper(cfg, events.empty() ? 0.0 : std::min(0.0, events.front().stamp));
  for (const SimEvent& ev : events) {
    mapper.ingest(ev);
  }
  mapper.finish();
  return mapper;
}

std::string format_cluster_log(const std::vector<ClusterLogEntry>& log) {
  std::string out =
      "cluster,t_start,t_last,edges,iterations,initial_cost,final_cost,"
      "converged,removed_vertices,removed_edges,merged_edges,skipped\n";
  for (const ClusterLogEntry& e : log) {
    out += std::to_string(e.index) + ',' + format_double(e.t_start) + ',' +
           format_double(e.t_last) + ',' + std::to_string(e.edges) + ',' +
           std::to_string(e.optimization.iterations) + ',' +
           format_double(e.optimization.initial_cost) + ',' +
           format_double(e.optimization.final_cost) + ',' +
           (e.optimization.converged ? "1" : "0") + ',' +
           std::to_string(e.removed_vertices) + ',' +
           std::to_string(e.removed_edges) + ',' +
           std::to_string(e.merged_edges) + ',' + std::to_string(e.skipped) +
           '\n';
  }
  return out;
}

RunReport run(const PipelineConfig& cfg) {
  cfg.mapper.validate();
  RunReport report;
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw IoError("cannot create '" + cfg.output_dir.string() +
                  "': " + ec.message());
  }

  EventStream events;
  if (cfg.input) {
    events = parse_events(*cfg.input);
  } else {
    events = generate(cfg.sim).events;
    report.events_path = cfg.output_dir / "events.txt";
    write_events(events, *report.events_path);
  }

  const Mapper mapper = replay(cfg.mapper, events);

  report.map_path = cfg.output_dir / "map.graph";
  report.metrics_path = cfg.output_dir / "metrics.csv";
  report.clusters_path = cfg.output_dir / "clusters.csv";
  write_graph(mapper.map(), report.map_path);
  write_metrics(mapper.metrics(), report.metrics_path);
  write_file(report.clusters_path, format_cluster_log(mapper.cluster_log()));

  report.totals = {events.size(),          mapper.map().vertex_count(),
                   mapper.map().edge_count(), mapper.optimize_calls(),
                   mapper.loops_added(),   mapper.loops_ignored()};
  return report;
}

namespace {

double ratio(std::size_t a, std::size_t b) {
  if (b == 0) {
    return a == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(a) / static_cast<double>(b);
}

std::map<double, MetricsRecord> by_stamp(
    const std::vector<MetricsRecord>& records) {
  std::map<double, MetricsRecord> out;
  for (const MetricsRecord& r : records) {
    out[r.stamp] = r;
  }
  return out;
}

}  // namespace

CompareSummary compare_records(const std::vector<MetricsRecord>& a,
                               const std::vector<MetricsRecord>& b) {
  const auto ma = by_stamp(a);
  const auto mb = by_stamp(b);
  CompareSummary summary;
  for (const auto& [stamp, ra] : ma) {
    const auto it = mb.find(stamp);
    if (it == mb.end()) {
      ++summary.unmatched_a;
      continue;
    }
    const MetricsRecord& rb = it->second;
    summary.rows.push_back({stamp, ra.vertex_count, rb.vertex_count,
                            ra.edge_count, rb.edge_count,
                            ratio(ra.vertex_count, rb.vertex_count),
                            ratio(ra.edge_count, rb.edge_count)});
  }
  summary.unmatched_b = mb.size() - summary.rows.size();
  if (summary.rows.empty()) {
    throw DomainError("compare: metrics series share no stamps");
  }
  const CompareRow& last = summary.rows.back();
  summary.vertex_delta = static_cast<std::int64_t>(last.vertices_a) -
                         static_cast<std::int64_t>(last.vertices_b);
  summary.edge_delta = static_cast<std::int64_t>(last.edges_a) -
                       static_cast<std::int64_t>(last.edges_b);
  summary.final_vertex_ratio = last.vertex_ratio;
  summary.final_edge_ratio = last.edge_ratio;
  return summary;
}

CompareSummary compare(const std::filesystem::path& metrics_a,
                       const std::filesystem::path& metrics_b) {
  return compare_records(read_metrics(metrics_a), read_metrics(metrics_b));
}

std::string format_comparison(const CompareSummary& s) {
  std::string out =
      "stamp,vertices_a,vertices_b,edges_a,edges_b,vertex_ratio,edge_ratio\n";
  for (const CompareRow& r : s.rows) {
    out += format_double(r.stamp) + ',' + std::to_string(r.vertices_a) + ',' +
           std::to_string(r.vertices_b) + ',' + std::to_string(r.edges_a) +
           ',' + std::to_string(r.edges_b) + ',' +
           format_double(r.vertex_ratio) + ',' + format_double(r.edge_ratio) +
           '\n';
  }
  out += "# final vertex delta " + std::to_string(s.vertex_delta) +
         ", edge delta " + std::to_string(s.edge_delta) +
         ", vertex ratio " + format_double(s.final_vertex_ratio) +
         ", edge ratio " + format_double(s.final_edge_ratio) +
         ", unmatched stamps " + std::to_string(s.unmatched_a) + "/" +
         std::to_string(s.unmatched_b) + '\n';
  return out;
}

}  // namespace compact_map
