#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/dataset_io.hpp"
#include "compact_map/events.hpp"
#include "compact_map/loop_clustering.hpp"
#include "compact_map/optimizer.hpp"
#include "compact_map/scene_integration.hpp"
#include "compact_map/sparsifier.hpp"

namespace compact_map {

enum class Mode {
  Standard,         // every odometry step becomes a vertex, nothing removed
  IntegrationOnly,  // every step kept, revisits integrated afterwards
  CompactFull,      // neighborhood-field gating plus integration
};

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode);

struct MapperConfig {
  Mode mode = Mode::CompactFull;
  NeighborhoodConfig neighborhood;
  ClusterConfig clusters;
  IntegrationConfig integration;
  SolverConfig solver;

  void validate() const;
  // The neighborhood settings actually applied: modes without gating use a
  // threshold below 1, which every step exceeds.
  NeighborhoodConfig effective_neighborhood() const;
  bool integration_enabled() const { return mode != Mode::Standard; }
};

struct ClusterLogEntry {
  std::size_t index = 0;
  double t_start = 0.0;
  double t_last = 0.0;
  std::size_t edges = 0;
  OptimizeReport optimization;
  std::size_t removed_vertices = 0;
  std::size_t removed_edges = 0;
  std::size_t merged_edges = 0;
  std::size_t skipped = 0;
};

// Streaming back end: odometry goes through the neighborhood-field gate into
// the map, loop closures are clustered by time, and each closed cluster
// triggers one batch optimization followed by scene integration.
//
// Loop events name an odometry frame. A frame has a place memory only if a
// vertex was created for it; loops to frames without one are ignored. Frames
// whose vertex was later merged away resolve through the merge chain.
class Mapper {
 public:
  using Observer =
      std::function<void(const MetricsRecord&, const CognitiveMap&)>;

  explicit Mapper(MapperConfig cfg, double start_stamp = 0.0);

  void ingest(const SimEvent& event);
  // End of stream: emits the pending vertex, closes the open cluster and
  // records a final metrics row.
  void finish();

  const CognitiveMap& map() const { return map_; }
  const std::vector<MetricsRecord>& metrics() const { return metrics_; }
  const std::vector<ClusterLogEntry>& cluster_log() const {
    return cluster_log_;
  }
  std::size_t optimize_calls() const { return optimize_calls_; }
  std::size_t loops_added() const { return loops_added_; }
  std::size_t loops_ignored() const { return loops_ignored_; }
  std::size_t frames() const { return frames_.size(); }
  const NeighborhoodAccumulator& accumulator() const { return acc_; }

  // Called after every metrics row with the map at that instant.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  struct FrameAnchor {
    VertexId vertex = 0;
    RelativeConstraint offset;  // vertex -> frame pose
    bool has_vertex = false;
  };

  void ingest_odom(const OdomEvent& odom, double stamp);
  void ingest_loop(const LoopEvent& loop, double stamp);
  void process_cluster(const LoopCluster& cluster);
  void apply_redirects(const std::vector<VertexRedirect>& redirects);
  // Follows merges until reaching a live vertex; offset is composed on.
  void resolve(VertexId& vertex, RelativeConstraint& offset) const;
  void record(double stamp);

  MapperConfig cfg_;
  NeighborhoodConfig gate_;
  CognitiveMap map_;
  NeighborhoodAccumulator acc_;
  LoopClusterManager clusters_;
  std::vector<FrameAnchor> frames_;
  std::unordered_map<VertexId, VertexRedirect> redirects_;
  std::vector<MetricsRecord> metrics_;
  std::vector<ClusterLogEntry> cluster_log_;
  Observer observer_;
  double last_stamp_ = 0.0;
  double last_cost_ = 0.0;
  std::size_t optimize_calls_ = 0;
  std::size_t loops_added_ = 0;
  std::size_t loops_ignored_ = 0;
  bool finished_ = false;
};

}  // namespace compact_map
