#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/events.hpp"

namespace compact_map {

// Event stream file, one record per line, whitespace separated, '#' starts
// a comment:
//   ODOM <stamp> <d> <heading> <facing>
//   LOOP <stamp> <target_frame> <d> <heading> <facing>
// Stamps must be non-decreasing.
EventStream parse_events_text(std::string_view text);
EventStream parse_events(const std::filesystem::path& path);
std::string format_events(const EventStream& events);
void write_events(const EventStream& events, const std::filesystem::path& path);

// Pose-graph file:
//   VERTEX2 <id> <x> <y> <theta>
//   EDGE2 <from> <to> <d> <heading> <facing> <SEQ|LOOP>
// Vertices in id order, then edges in id order. Edge ids are not stored;
// reading assigns them in file order. Stamps are not stored and read as 0.
CognitiveMap parse_graph_text(std::string_view text);
CognitiveMap read_graph(const std::filesystem::path& path);
std::string format_graph(const CognitiveMap& map);
void write_graph(const CognitiveMap& map, const std::filesystem::path& path);

// One row per ingestion event.
struct MetricsRecord {
  double stamp = 0.0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t optimize_calls = 0;
  double final_cost = 0.0;  // of the most recent optimization, 0 before any
};

// CSV with header "stamp,vertex_count,edge_count,optimize_calls,final_cost".
std::string format_metrics(const std::vector<MetricsRecord>& records);
void write_metrics(const std::vector<MetricsRecord>& records,
                   const std::filesystem::path& path);
std::vector<MetricsRecord> parse_metrics_text(std::string_view text);
std::vector<MetricsRecord> read_metrics(const std::filesystem::path& path);

// Text that reads back as the same double (17 significant digits).
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace compact_map
