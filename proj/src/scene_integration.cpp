#include "compact_map/scene_integration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "compact_map/error.hpp"

namespace compact_map {

void IntegrationConfig::validate() const {
  if (!(merge_radius > 0.0) || !(short_edge_threshold > 0.0)) {
    throw DomainError("integration thresholds must be > 0");
  }
  if (short_edge_threshold > merge_radius) {
    throw DomainError("short_edge_threshold must be <= merge_radius");
  }
}

IntegrationReport& IntegrationReport::operator+=(
    const IntegrationReport& other) {
  removed_vertices += other.removed_vertices;
  removed_edges += other.removed_edges;
  merged_edges += other.merged_edges;
  skipped += other.skipped;
  removed_vertex_ids.insert(removed_vertex_ids.end(),
                            other.removed_vertex_ids.begin(),
                            other.removed_vertex_ids.end());
  removed_edge_ids.insert(removed_edge_ids.end(),
                          other.removed_edge_ids.begin(),
                          other.removed_edge_ids.end());
  redirects.insert(redirects.end(), other.redirects.begin(),
                   other.redirects.end());
  return *this;
}

namespace {

void drop_edge(CognitiveMap& map, EdgeId id, IntegrationReport& report) {
  map.remove_edge(id);
  ++report.removed_edges;
  report.removed_edge_ids.push_back(id);
}

void drop_vertex(CognitiveMap& map, VertexId id, IntegrationReport& report) {
  map.remove_vertex(id);
  ++report.removed_vertices;
  report.removed_vertex_ids.push_back(id);
}

bool has_sequential_between(const CognitiveMap& map, VertexId a, VertexId b) {
  return !map.edges_between(a, b, EdgeKind::Sequential).empty();
}

// Merges `removed` into `survivor`, where survivor_to_removed is the
// constraint survivor -> removed and `via` is the edge that justified the
// merge. Contracting an edge never disconnects the graph.
void contract(CognitiveMap& map, VertexId removed, VertexId survivor,
              const RelativeConstraint& survivor_to_removed, EdgeId via,
              IntegrationReport& report) {
  drop_edge(map, via, report);

  std::map<VertexId, std::vector<EdgeId>> by_neighbor;
  for (EdgeId id : map.incident_edges(removed)) {
    const Edge& e = map.edge(id);
    by_neighbor[e.from == removed ? e.to : e.from].push_back(id);
  }

  const RelativeConstraint removed_to_survivor = invert(survivor_to_removed);
  for (const auto& [neighbor, ids] : by_neighbor) {
    if (neighbor == survivor) {
      for (EdgeId id : ids) {
        drop_edge(map, id, report);
      }
      continue;
    }
    EdgeId keep = ids.front();
    for (EdgeId id : ids) {
      if (map.edge(id).kind == EdgeKind::LoopClosure) {
        keep = id;
        break;
      }
    }
    for (EdgeId id : ids) {
      if (id != keep) {
        drop_edge(map, id, report);
      }
    }
    const Edge e = map.edge(keep);
    if (e.kind == EdgeKind::Sequential &&
        has_sequential_between(map, survivor, neighbor)) {
      drop_edge(map, keep, report);
      continue;
    }
    if (e.from == removed) {
      map.reroute_edge(keep, survivor, e.to,
                       compose(survivor_to_removed, e.constraint));
    } else {
      map.reroute_edge(keep, e.from, survivor,
                       compose(e.constraint, removed_to_survivor));
    }
    ++report.merged_edges;
  }

  drop_vertex(map, removed, report);
  report.redirects.push_back({removed, survivor, survivor_to_removed});
}

double distance_to_segment(const Pose2& p, const Pose2& a, const Pose2& b) {
  const double vx = b.x() - a.x();
  const double vy = b.y() - a.y();
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x() - a.x()) * vx + (p.y() - a.y()) * vy) / len2, 0.0,
                   1.0);
  }
  return std::hypot(p.x() - (a.x() + t * vx), p.y() - (a.y() + t * vy));
}

// A vertex created during the cluster that only detours between two older
// vertices which are already directly joined.
void drop_redundant_detours(CognitiveMap& map, const LoopCluster& cluster,
                            const IntegrationConfig& cfg,
                            IntegrationReport& report) {
  std::vector<VertexId> candidates;
  for (const auto& [id, v] : map.vertices()) {
    if (v.stamp >= cluster.t_start && v.stamp <= cluster.t_last) {
      candidates.push_back(id);
    }
  }
  for (VertexId v : candidates) {
    if (!map.has_vertex(v)) {
      continue;
    }
    const auto& incident = map.incident_edges(v);
    if (incident.size() != 2) {
      continue;
    }
    const Edge first = map.edge(*incident.begin());
    const Edge second = map.edge(*std::next(incident.begin()));
    if (first.kind != EdgeKind::Sequential ||
        second.kind != EdgeKind::Sequential) {
      continue;
    }
    const VertexId a = first.from == v ? first.to : first.from;
    const VertexId b = second.from == v ? second.to : second.from;
    if (a == b || a > v || b > v) {
      continue;
    }
    if (distance_to_segment(map.vertex(v).pose, map.vertex(a).pose,
                            map.vertex(b).pose) > cfg.merge_radius) {
      continue;
    }
    if (!has_sequential_between(map, a, b)) {
      // Redundant, but v carries the only a-b path.
      ++report.skipped;
      continue;
    }
    const RelativeConstraint a_to_v =
        first.from == a ? first.constraint : invert(first.constraint);
    drop_edge(map, first.id, report);
    drop_edge(map, second.id, report);
    drop_vertex(map, v, report);
    report.redirects.push_back({v, a, a_to_v});
  }
}

}  // namespace

IntegrationReport integrate_cluster(CognitiveMap& map,
                                    const LoopCluster& cluster,
                                    const IntegrationConfig& cfg) {
  cfg.validate();
  IntegrationReport report;
  for (EdgeId id : cluster.edges) {
    if (!map.has_edge(id)) {
      continue;
    }
    const Edge e = map.edge(id);
    if (e.kind != EdgeKind::LoopClosure) {
      continue;
    }
    const VertexId survivor = std::min(e.from, e.to);
    const VertexId removed = std::max(e.from, e.to);
    if (distance(map.vertex(survivor).pose, map.vertex(removed).pose) >
        cfg.merge_radius) {
      continue;
    }
    const RelativeConstraint survivor_to_removed =
        e.from == survivor ? e.constraint : invert(e.constraint);
    contract(map, removed, survivor, survivor_to_removed, id, report);
  }
  drop_redundant_detours(map, cluster, cfg, report);
  return report;
}

IntegrationReport remove_short_edges(CognitiveMap& map,
                                     const IntegrationConfig& cfg) {
  cfg.validate();
  IntegrationReport report;
  for (;;) {
    std::optional<EdgeId> shortest;
    double best = 0.0;
    for (const auto& [id, e] : map.edges()) {
      if (e.kind != EdgeKind::Sequential ||
          e.constraint.d() > cfg.short_edge_threshold) {
        continue;
      }
      if (!shortest || e.constraint.d() < best) {
        shortest = id;
        best = e.constraint.d();
      }
    }
    if (!shortest) {
      break;
    }
    const Edge e = map.edge(*shortest);
    const VertexId survivor = std::min(e.from, e.to);
    const VertexId removed = std::max(e.from, e.to);
    const RelativeConstraint survivor_to_removed =
        e.from == survivor ? e.constraint : invert(e.constraint);
    contract(map, removed, survivor, survivor_to_removed, e.id, report);
  }
  return report;
}

}  // namespace compact_map
