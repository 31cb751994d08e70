#include "compact_map/mapper.hpp"

#include <cmath>
#include <string>

#include "compact_map/error.hpp"

namespace compact_map {

Mode parse_mode(std::string_view name) {
  if (name == "standard") {
    return Mode::Standard;
  }
  if (name == "compact-integration-only") {
    return Mode::IntegrationOnly;
  }
  if (name == "compact-full") {
    return Mode::CompactFull;
  }
  throw DomainError("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Standard:
      return "standard";
    case Mode::IntegrationOnly:
      return "compact-integration-only";
    case Mode::CompactFull:
      return "compact-full";
  }
  return "?";
}

void MapperConfig::validate() const {
  neighborhood.validate();
  clusters.validate();
  integration.validate();
  solver.validate();
}

NeighborhoodConfig MapperConfig::effective_neighborhood() const {
  NeighborhoodConfig gate = neighborhood;
  if (mode != Mode::CompactFull) {
    gate.delta_threshold = 0.5;
  }
  return gate;
}

Mapper::Mapper(MapperConfig cfg, double start_stamp)
    : cfg_(std::move(cfg)),
      gate_(cfg_.effective_neighborhood()),
      clusters_(cfg_.clusters),
      last_stamp_(start_stamp) {
  cfg_.validate();
  const VertexId origin = map_.add_vertex(Pose2(0.0, 0.0, 0.0), start_stamp);
  acc_ = NeighborhoodAccumulator::at(origin, start_stamp);
  frames_.push_back({origin, RelativeConstraint::identity(), true});
  record(start_stamp);
}

void Mapper::ingest(const SimEvent& event) {
  if (finished_) {
    throw DomainError("Mapper: ingest after finish");
  }
  if (!std::isfinite(event.stamp) || event.stamp < last_stamp_) {
    throw DomainError("Mapper: event stamps must be non-decreasing");
  }
  last_stamp_ = event.stamp;
  if (const auto* odom = std::get_if<OdomEvent>(&event.payload)) {
    ingest_odom(*odom, event.stamp);
  } else {
    ingest_loop(std::get<LoopEvent>(event.payload), event.stamp);
  }
  record(event.stamp);
}

void Mapper::ingest_odom(const OdomEvent& odom, double stamp) {
  const IngestResult r = ingest_odometry(map_, acc_, odom.step, stamp, gate_);
  if (r.kept) {
    frames_.push_back({*r.kept, RelativeConstraint::identity(), true});
  } else {
    frames_.push_back({acc_.anchor_vertex, acc_.pending, false});
  }
}

void Mapper::ingest_loop(const LoopEvent& loop, double stamp) {
  if (loop.target_frame < 0 ||
      static_cast<std::size_t>(loop.target_frame) >= frames_.size()) {
    throw MapError("loop closure targets unknown frame " +
                   std::to_string(loop.target_frame));
  }
  const FrameAnchor target =
      frames_[static_cast<std::size_t>(loop.target_frame)];
  if (!target.has_vertex) {
    ++loops_ignored_;
    return;
  }

  if (const auto v = flush_pending(map_, acc_, stamp)) {
    frames_.back() = {*v, RelativeConstraint::identity(), true};
  }

  VertexId old_vertex = target.vertex;
  RelativeConstraint offset = target.offset;
  resolve(old_vertex, offset);

  const VertexId current = acc_.anchor_vertex;
  if (old_vertex == current ||
      !map_.edges_between(current, old_vertex, EdgeKind::LoopClosure)
           .empty()) {
    ++loops_ignored_;
    return;
  }
  const RelativeConstraint c =
      compose(acc_.pending, compose(loop.constraint, invert(offset)));
  const EdgeId edge =
      map_.add_edge(current, old_vertex, c, EdgeKind::LoopClosure, stamp);
  ++loops_added_;

  const AssignResult assigned = clusters_.assign(edge, stamp);
  if (const auto* fresh = std::get_if<NewCluster>(&assigned)) {
    if (fresh->closed) {
      process_cluster(*fresh->closed);
    }
  }
}

void Mapper::process_cluster(const LoopCluster& cluster) {
  ClusterLogEntry entry;
  entry.index = cluster.index;
  entry.t_start = cluster.t_start;
  entry.t_last = cluster.t_last;
  entry.edges = cluster.edges.size();

  entry.optimization = on_cluster_closed(map_, cluster, cfg_.solver);
  ++optimize_calls_;
  last_cost_ = entry.optimization.final_cost;

  if (cfg_.integration_enabled()) {
    IntegrationReport report =
        integrate_cluster(map_, cluster, cfg_.integration);
    report += remove_short_edges(map_, cfg_.integration);
    apply_redirects(report.redirects);
    entry.removed_vertices = report.removed_vertices;
    entry.removed_edges = report.removed_edges;
    entry.merged_edges = report.merged_edges;
    entry.skipped = report.skipped;
    clusters_.prune_missing(map_);
  }
  cluster_log_.push_back(entry);
}

void Mapper::apply_redirects(const std::vector<VertexRedirect>& redirects) {
  for (const VertexRedirect& r : redirects) {
    redirects_[r.removed] = r;
    if (acc_.anchor_vertex == r.removed) {
      acc_.anchor_vertex = r.survivor;
      acc_.pending = compose(r.survivor_to_removed, acc_.pending);
    }
  }
}

void Mapper::resolve(VertexId& vertex, RelativeConstraint& offset) const {
  for (auto it = redirects_.find(vertex); it != redirects_.end();
       it = redirects_.find(vertex)) {
    offset = compose(it->second.survivor_to_removed, offset);
    vertex = it->second.survivor;
  }
}

void Mapper::finish() {
  if (finished_) {
    return;
  }
  if (const auto v = flush_pending(map_, acc_, last_stamp_)) {
    frames_.back() = {*v, RelativeConstraint::identity(), true};
  }
  if (auto cluster = clusters_.flush()) {
    process_cluster(*cluster);
  }
  finished_ = true;
  record(last_stamp_);
}

void Mapper::record(double stamp) {
  const MetricsRecord r{stamp, map_.vertex_count(), map_.edge_count(),
                        optimize_calls_, last_cost_};
  metrics_.push_back(r);
  if (observer_) {
    observer_(r, map_);
  }
}

}  // namespace compact_map
