#pragma once

#include <optional>
#include <span>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/geometry.hpp"

namespace compact_map {

// Weights and threshold of the neighborhood field g(d, theta).
struct NeighborhoodConfig {
  double alpha = 10.0;            // 1/m
  double beta = 10.0;             // 1/rad
  double delta_threshold = 3.746;

  // alpha, beta >= 0 and delta_threshold > 0. A threshold below 1 turns the
  // gate off, since g >= 1 always.
  void validate() const;
};

// Novelty of the motion accumulated since the last kept vertex:
// g = (1 + alpha d)(1 + beta theta).
double neighborhood_field(double d, double theta,
                          const NeighborhoodConfig& cfg);

// Odometry folded since the last kept vertex.
struct NeighborhoodAccumulator {
  VertexId anchor_vertex = 0;
  RelativeConstraint pending;  // anchor -> current pose
  double d_acc = 0.0;          // path length
  double theta_acc = 0.0;      // sum of |facing|
  double t_last = 0.0;

  static NeighborhoodAccumulator at(VertexId anchor, double stamp) {
    NeighborhoodAccumulator acc;
    acc.anchor_vertex = anchor;
    acc.t_last = stamp;
    return acc;
  }

  bool has_pending_motion() const { return d_acc > 0.0 || theta_acc > 0.0; }
};

struct IngestResult {
  std::optional<VertexId> kept;  // empty when the step was skipped

  bool was_kept() const { return kept.has_value(); }
};

// Folds one odometry step into the accumulator and, once the neighborhood
// field exceeds the threshold, emits a vertex at the dead-reckoned pose with
// one sequential edge carrying the whole folded motion.
IngestResult ingest_odometry(CognitiveMap& map, NeighborhoodAccumulator& acc,
                             const RelativeConstraint& step, double stamp,
                             const NeighborhoodConfig& cfg);

// Emits the pending vertex regardless of the gate. Used before a loop
// closure so the closure has a concrete endpoint. Returns the id of the new
// vertex, or nothing if no motion was pending.
std::optional<VertexId> flush_pending(CognitiveMap& map,
                                      NeighborhoodAccumulator& acc,
                                      double stamp);

// Left fold of compose over a non-empty chain.
RelativeConstraint merged_chain_constraint(
    std::span<const RelativeConstraint> steps);

}  // namespace compact_map
