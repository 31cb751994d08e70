#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "compact_map/dataset_io.hpp"
#include "compact_map/mapper.hpp"
#include "compact_map/simulator.hpp"

namespace compact_map {

struct PipelineConfig {
  MapperConfig mapper;
  // Event file to replay. When empty, `sim` is generated instead.
  std::optional<std::filesystem::path> input;
  SimConfig sim = preset("figure-eight");
  std::filesystem::path output_dir = "out";
};

struct RunTotals {
  std::size_t events = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t optimize_calls = 0;
  std::size_t loops_added = 0;
  std::size_t loops_ignored = 0;
};

struct RunReport {
  std::filesystem::path map_path;
  std::filesystem::path metrics_path;
  std::filesystem::path clusters_path;
  std::optional<std::filesystem::path> events_path;  // written for sims
  RunTotals totals;
};

// Replays an event stream through a Mapper and returns it finished.
Mapper replay(const MapperConfig& cfg, const EventStream& events);

// Loads or simulates the events, maps them and writes map.graph,
// metrics.csv and clusters.csv (plus events.txt for simulated input) into
// output_dir.
RunReport run(const PipelineConfig& cfg);

std::string format_cluster_log(const std::vector<ClusterLogEntry>& log);

struct CompareRow {
  double stamp = 0.0;
  std::size_t vertices_a = 0;
  std::size_t vertices_b = 0;
  std::size_t edges_a = 0;
  std::size_t edges_b = 0;
  double vertex_ratio = 1.0;  // a / b, 1 when both are 0
  double edge_ratio = 1.0;
};

struct CompareSummary {
  std::vector<CompareRow> rows;  // stamps present in both, ascending
  std::size_t unmatched_a = 0;   // stamps only in a
  std::size_t unmatched_b = 0;
  std::int64_t vertex_delta = 0;  // final a - b
  std::int64_t edge_delta = 0;
  double final_vertex_ratio = 1.0;
  double final_edge_ratio = 1.0;
};

// Aligns two metrics series by stamp (the last row wins for repeated
// stamps). Throws DomainError when no stamp is shared.
CompareSummary compare_records(const std::vector<MetricsRecord>& a,
                               const std::vector<MetricsRecord>& b);
CompareSummary compare(const std::filesystem::path& metrics_a,
                       const std::filesystem::path& metrics_b);
std::string format_comparison(const CompareSummary& summary);

}  // namespace compact_map
