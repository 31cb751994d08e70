#include "compact_map/sparsifier.hpp"

#include <algorithm>
#include <cmath>

#include "compact_map/error.hpp"

namespace compact_map {

void NeighborhoodConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw DomainError("neighborhood weights must be >= 0");
  }
  if (!(delta_threshold > 0.0) || !std::isfinite(delta_threshold)) {
    throw DomainError("neighborhood threshold must be finite and > 0");
  }
}

double neighborhood_field(double d, double theta,
                          const NeighborhoodConfig& cfg) {
  return (1.0 + cfg.alpha * d) * (1.0 + cfg.beta * theta);
}

namespace {

VertexId emit_vertex(CognitiveMap& map, NeighborhoodAccumulator& acc,
                     double stamp) {
  const Pose2 pose = predict(map.vertex(acc.anchor_vertex).pose, acc.pending);
  const VertexId v = map.add_vertex(pose, stamp);
  map.add_edge(acc.anchor_vertex, v, acc.pending, EdgeKind::Sequential, stamp);
  acc = NeighborhoodAccumulator::at(v, stamp);
  return v;
}

}  // namespace

IngestResult ingest_odometry(CognitiveMap& map, NeighborhoodAccumulator& acc,
                             const RelativeConstraint& step, double stamp,
                             const NeighborhoodConfig& cfg) {
  if (!map.has_vertex(acc.anchor_vertex)) {
    throw MapError("ingest_odometry: accumulator anchor not in map");
  }
  if (stamp < acc.t_last) {
    throw DomainError("ingest_odometry: stamp regression");
  }
  acc.pending = compose(acc.pending, step);
  acc.d_acc += step.d();
  acc.theta_acc += std::abs(step.facing());
  acc.t_last = stamp;
  if (neighborhood_field(acc.d_acc, acc.theta_acc, cfg) > cfg.delta_threshold) {
    return {emit_vertex(map, acc, stamp)};
  }
  return {};
}

std::optional<VertexId> flush_pending(CognitiveMap& map,
                                      NeighborhoodAccumulator& acc,
                                      double stamp) {
  if (!acc.has_pending_motion()) {
    return std::nullopt;
  }
  return emit_vertex(map, acc, std::max(stamp, acc.t_last));
}

RelativeConstraint merged_chain_constraint(
    std::span<const RelativeConstraint> steps) {
  if (steps.empty()) {
    throw DomainError("merged_chain_constraint: empty chain");
  }
  RelativeConstraint out = steps.front();
  for (std::size_t k = 1; k < steps.size(); ++k) {
    out = compose(out, steps[k]);
  }
  return out;
}

}  // namespace compact_map
