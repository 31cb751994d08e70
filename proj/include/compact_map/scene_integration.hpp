#pragma once

#include <cstddef>
#include <vector>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/loop_clustering.hpp"

namespace compact_map {

struct IntegrationConfig {
  // Loop-connected vertices closer than this after optimization are treated
  // as the same place.
  double merge_radius = 0.05;
  // Sequential edges at most this long are collapsed.
  double short_edge_threshold = 0.02;

  void validate() const;
};

// A removed vertex and where its information went: the pose of `removed`
// is predict(pose(survivor), survivor_to_removed).
struct VertexRedirect {
  VertexId removed = 0;
  VertexId survivor = 0;
  RelativeConstraint survivor_to_removed;
};

struct IntegrationReport {
  std::size_t removed_vertices = 0;
  std::size_t removed_edges = 0;
  // Edges moved onto a surviving vertex (their constraint recomposed).
  std::size_t merged_edges = 0;
  // Removals refused because they would disconnect the map.
  std::size_t skipped = 0;
  std::vector<VertexId> removed_vertex_ids;
  std::vector<EdgeId> removed_edge_ids;
  std::vector<VertexRedirect> redirects;

  IntegrationReport& operator+=(const IntegrationReport& other);
};

// Removes revisiting vertices after a cluster has been optimized. For every
// loop edge of the cluster (stamp order) whose endpoints ended up within
// merge_radius, the newer endpoint is merged into the older one:
// its other edges are re-attached to the older vertex by SE(2)
// composition, parallel sequential edges collapse onto the first-created
// one, and the loop edge itself is consumed. Afterwards, degree-two
// vertices created during the cluster that merely detour between two
// already-joined older vertices are dropped with their edges.
IntegrationReport integrate_cluster(CognitiveMap& map,
                                    const LoopCluster& cluster,
                                    const IntegrationConfig& cfg);

// Collapses sequential edges no longer than short_edge_threshold, shortest
// first, until none remain. The newer endpoint is merged into the older
// one. When the removed vertex shares several constraints with a neighbor,
// one representative survives (a loop closure if present) and the
// sequential duplicates are dropped.
IntegrationReport remove_short_edges(CognitiveMap& map,
                                     const IntegrationConfig& cfg);

}  // namespace compact_map
