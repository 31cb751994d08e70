#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "compact_map/geometry.hpp"

namespace compact_map {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;

enum class EdgeKind { Sequential, LoopClosure };

struct Vertex {
  VertexId id = 0;
  Pose2 pose;
  double stamp = 0.0;
};

struct Edge {
  EdgeId id = 0;
  VertexId from = 0;
  VertexId to = 0;
  RelativeConstraint constraint;
  EdgeKind kind = EdgeKind::Sequential;
  double stamp = 0.0;
};

// Pose graph of the cognitive map: vertices are robot poses, edges are
// relative constraints from odometry (Sequential) or place recognition
// (LoopClosure).
//
// Ids are assigned monotonically and never reused, so ids of removed
// vertices and edges stay meaningful in logs. Iteration over vertices and
// edges is in ascending id order.
//
// Single writer. Copies are independent; snapshot() hands out an immutable
// copy that may be read from other threads.
class CognitiveMap {
 public:
  // Appends a vertex with the next free id. Stamps must be non-decreasing
  // in creation order.
  VertexId add_vertex(const Pose2& pose, double stamp);
  // Inserts a vertex with an explicit id (used when loading files).
  void insert_vertex(const Vertex& v);

  EdgeId add_edge(VertexId from, VertexId to, const RelativeConstraint& c,
                  EdgeKind kind, double stamp);
  void insert_edge(const Edge& e);

  // Moves an existing edge onto new endpoints and constraint, keeping its
  // id, kind and stamp.
  void reroute_edge(EdgeId id, VertexId from, VertexId to,
                    const RelativeConstraint& c);

  void remove_edge(EdgeId id);
  // The vertex must have no incident edges.
  void remove_vertex(VertexId id);

  void set_pose(VertexId id, const Pose2& pose);

  bool has_vertex(VertexId id) const { return vertices_.contains(id); }
  bool has_edge(EdgeId id) const { return edges_.contains(id); }
  const Vertex& vertex(VertexId id) const;
  const Edge& edge(EdgeId id) const;
  const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  const std::set<EdgeId>& incident_edges(VertexId id) const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return vertices_.empty(); }

  // Sequential edge from -> to, if any.
  std::optional<EdgeId> find_sequential(VertexId from, VertexId to) const;
  // Any edge joining a and b in either direction, optionally of one kind.
  std::vector<EdgeId> edges_between(VertexId a, VertexId b) const;
  std::vector<EdgeId> edges_between(VertexId a, VertexId b,
                                    EdgeKind kind) const;

  std::optional<VertexId> lowest_vertex_id() const;
  VertexId next_vertex_id() const { return next_vertex_id_; }
  EdgeId next_edge_id() const { return next_edge_id_; }

  // True for the empty map and for maps whose undirected graph has a single
  // component.
  bool is_weakly_connected() const;

  // Rebuilds the adjacency index from the edge collection and compares.
  bool adjacency_consistent() const;

  std::shared_ptr<const CognitiveMap> snapshot() const {
    return std::make_shared<const CognitiveMap>(*this);
  }

 private:
  void check_edge_endpoints(VertexId from, VertexId to, EdgeKind kind,
                            std::optional<EdgeId> ignore) const;

  std::map<VertexId, Vertex> vertices_;
  std::map<EdgeId, Edge> edges_;
  std::map<VertexId, std::set<EdgeId>> adjacency_;
  VertexId next_vertex_id_ = 0;
  EdgeId next_edge_id_ = 0;
  std::optional<double> last_vertex_stamp_;
};

// Structural equality: same vertex ids and poses, and the same edge
// sequence (endpoints, kinds, constraints) in id order. Edge ids and stamps
// are not compared. Tolerance applies to every floating value.
bool structurally_equal(const CognitiveMap& a, const CognitiveMap& b,
                        double tol);

const char* to_string(EdgeKind kind);

}  // namespace compact_map
