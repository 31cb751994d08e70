#include "compact_map/cognitive_map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "compact_map/error.hpp"

namespace compact_map {

namespace {

std::string vid(VertexId id) { return "vertex " + std::to_string(id); }
std::string eid(EdgeId id) { return "edge " + std::to_string(id); }

}  // namespace

VertexId CognitiveMap::add_vertex(const Pose2& pose, double stamp) {
  if (!std::isfinite(stamp)) {
    throw DomainError("add_vertex: non-finite stamp");
  }
  if (last_vertex_stamp_ && stamp < *last_vertex_stamp_) {
    throw MapError("add_vertex: stamp regression");
  }
  const VertexId id = next_vertex_id_++;
  vertices_.emplace(id, Vertex{id, pose, stamp});
  adjacency_[id];
  last_vertex_stamp_ = stamp;
  return id;
}

void CognitiveMap::insert_vertex(const Vertex& v) {
  if (vertices_.contains(v.id) || v.id < 0) {
    throw MapError("insert_vertex: duplicate or negative id for " + vid(v.id));
  }
  vertices_.emplace(v.id, v);
  adjacency_[v.id];
  next_vertex_id_ = std::max(next_vertex_id_, v.id + 1);
  last_vertex_stamp_ = std::max(last_vertex_stamp_.value_or(v.stamp), v.stamp);
}

void CognitiveMap::check_edge_endpoints(VertexId from, VertexId to,
                                        EdgeKind kind,
                                        std::optional<EdgeId> ignore) const {
  if (!vertices_.contains(from)) {
    throw MapError("edge references unknown " + vid(from));
  }
  if (!vertices_.contains(to)) {
    throw MapError("edge references unknown " + vid(to));
  }
  if (from == to) {
    throw MapError("self loop on " + vid(from));
  }
  if (kind == EdgeKind::Sequential) {
    const auto existing = find_sequential(from, to);
    if (existing && existing != ignore) {
      throw MapError("duplicate sequential edge " + std::to_string(from) +
                     " -> " + std::to_string(to));
    }
  }
}

EdgeId CognitiveMap::add_edge(VertexId from, VertexId to,
                              const RelativeConstraint& c, EdgeKind kind,
                              double stamp) {
  check_edge_endpoints(from, to, kind, std::nullopt);
  const EdgeId id = next_edge_id_++;
  edges_.emplace(id, Edge{id, from, to, c, kind, stamp});
  adjacency_[from].insert(id);
  adjacency_[to].insert(id);
  return id;
}

void CognitiveMap::insert_edge(const Edge& e) {
  if (edges_.contains(e.id) || e.id < 0) {
    throw MapError("insert_edge: duplicate or negative id for " + eid(e.id));
  }
  check_edge_endpoints(e.from, e.to, e.kind, std::nullopt);
  edges_.emplace(e.id, e);
  adjacency_[e.from].insert(e.id);
  adjacency_[e.to].insert(e.id);
  next_edge_id_ = std::max(next_edge_id_, e.id + 1);
}

void CognitiveMap::reroute_edge(EdgeId id, VertexId from, VertexId to,
                                const RelativeConstraint& c) {
  auto it = edges_.find(id);
  if (it == edges_.end()) {
    throw MapError("reroute_edge: unknown " + eid(id));
  }
  check_edge_endpoints(from, to, it->second.kind, id);
  Edge& e = it->second;
  adjacency_[e.from].erase(id);
  adjacency_[e.to].erase(id);
  e.from = from;
  e.to = to;
  e.constraint = c;
  adjacency_[from].insert(id);
  adjacency_[to].insert(id);
}

void CognitiveMap::remove_edge(EdgeId id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) {
    throw MapError("remove_edge: unknown " + eid(id));
  }
  adjacency_[it->second.from].erase(id);
  adjacency_[it->second.to].erase(id);
  edges_.erase(it);
}

void CognitiveMap::remove_vertex(VertexId id) {
  if (!vertices_.contains(id)) {
    throw MapError("remove_vertex: unknown " + vid(id));
  }
  if (!adjacency_.at(id).empty()) {
    throw MapError("remove_vertex: " + vid(id) + " still has edges");
  }
  vertices_.erase(id);
  adjacency_.erase(id);
}

void CognitiveMap::set_pose(VertexId id, const Pose2& pose) {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw MapError("set_pose: unknown " + vid(id));
  }
  it->second.pose = pose;
}

const Vertex& CognitiveMap::vertex(VertexId id) const {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw MapError("unknown " + vid(id));
  }
  return it->second;
}

const Edge& CognitiveMap::edge(EdgeId id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) {
    throw MapError("unknown " + eid(id));
  }
  return it->second;
}

const std::set<EdgeId>& CognitiveMap::incident_edges(VertexId id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) {
    throw MapError("unknown " + vid(id));
  }
  return it->second;
}

std::optional<EdgeId> CognitiveMap::find_sequential(VertexId from,
                                                    VertexId to) const {
  auto it = adjacency_.find(from);
  if (it == adjacency_.end()) {
    return std::nullopt;
  }
  for (EdgeId id : it->second) {
    const Edge& e = edges_.at(id);
    if (e.kind == EdgeKind::Sequential && e.from == from && e.to == to) {
      return id;
    }
  }
  return std::nullopt;
}

std::vector<EdgeId> CognitiveMap::edges_between(VertexId a,
                                                VertexId b) const {
  std::vector<EdgeId> out;
  auto it = adjacency_.find(a);
  if (it == adjacency_.end()) {
    return out;
  }
  for (EdgeId id : it->second) {
    const Edge& e = edges_.at(id);
    if ((e.from == a && e.to == b) || (e.from == b && e.to == a)) {
      out.push_back(id);
    }
  }
  return out;
}

std::vector<EdgeId> CognitiveMap::edges_between(VertexId a, VertexId b,
                                                EdgeKind kind) const {
  std::vector<EdgeId> out = edges_between(a, b);
  std::erase_if(out, [&](EdgeId id) { return edges_.at(id).kind != kind; });
  return out;
}

std::optional<VertexId> CognitiveMap::lowest_vertex_id() const {
  if (vertices_.empty()) {
    return std::nullopt;
  }
  return vertices_.begin()->first;
}

bool CognitiveMap::is_weakly_connected() const {
  if (vertices_.empty()) {
    return true;
  }
  std::set<VertexId> seen{vertices_.begin()->first};
  std::deque<VertexId> queue{vertices_.begin()->first};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId id : adjacency_.at(v)) {
      const Edge& e = edges_.at(id);
      const VertexId other = e.from == v ? e.to : e.from;
      if (seen.insert(other).second) {
        queue.push_back(other);
      }
    }
  }
  return seen.size() == vertices_.size();
}

bool CognitiveMap::adjacency_consistent() const {
  std::map<VertexId, std::set<EdgeId>> rebuilt;
  for (const auto& [id, v] : vertices_) {
    rebuilt[id];
  }
  for (const auto& [id, e] : edges_) {
    if (!vertices_.contains(e.from) || !vertices_.contains(e.to)) {
      return false;
    }
    rebuilt[e.from].insert(id);
    rebuilt[e.to].insert(id);
  }
  return rebuilt == adjacency_;
}

bool structurally_equal(const CognitiveMap& a, const CognitiveMap& b,
                        double tol) {
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  auto close_angle = [tol](double x, double y) {
    return angular_distance(x, y) <= tol;
  };
  if (a.vertex_count() != b.vertex_count() ||
      a.edge_count() != b.edge_count()) {
    return false;
  }
  for (auto ia = a.vertices().begin(), ib = b.vertices().begin();
       ia != a.vertices().end(); ++ia, ++ib) {
    const Pose2& pa = ia->second.pose;
    const Pose2& pb = ib->second.pose;
    if (ia->first != ib->first || !close(pa.x(), pb.x()) ||
        !close(pa.y(), pb.y()) || !close_angle(pa.theta(), pb.theta())) {
      return false;
    }
  }
  for (auto ia = a.edges().begin(), ib = b.edges().begin();
       ia != a.edges().end(); ++ia, ++ib) {
    const Edge& ea = ia->second;
    const Edge& eb = ib->second;
    if (ea.from != eb.from || ea.to != eb.to || ea.kind != eb.kind ||
        !close(ea.constraint.d(), eb.constraint.d()) ||
        !close_angle(ea.constraint.heading(), eb.constraint.heading()) ||
        !close_angle(ea.constraint.facing(), eb.constraint.facing())) {
      return false;
    }
  }
  return true;
}

const char* to_string(EdgeKind kind) {
  return kind == EdgeKind::Sequential ? "SEQ" : "LOOP";
}

}  // namespace compact_map
