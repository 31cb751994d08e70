#include <random>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/error.hpp"
#include "doctest.h"

using namespace compact_map;

TEST_CASE("vertex and edge bookkeeping") {
  CognitiveMap map;
  CHECK(map.empty());
  CHECK(map.is_weakly_connected());
  const VertexId a = map.add_vertex({0, 0, 0}, 0.0);
  const VertexId b = map.add_vertex({1, 0, 0}, 1.0);
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK_FALSE(map.is_weakly_connected());
  const EdgeId e = map.add_edge(a, b, {1, 0, 0}, EdgeKind::Sequential, 1.0);
  CHECK(map.is_weakly_connected());
  CHECK(map.incident_edges(a).contains(e));
  CHECK(map.incident_edges(b).contains(e));
  CHECK(map.find_sequential(a, b) == e);
  CHECK_FALSE(map.find_sequential(b, a).has_value());
  CHECK(map.edges_between(b, a).size() == 1);
  CHECK(map.edges_between(a, b, EdgeKind::LoopClosure).empty());
  CHECK(map.adjacency_consistent());
  CHECK(map.lowest_vertex_id() == a);
}

TEST_CASE("invalid mutations are rejected") {
  CognitiveMap map;
  const VertexId a = map.add_vertex({0, 0, 0}, 1.0);
  const VertexId b = map.add_vertex({1, 0, 0}, 2.0);
  CHECK_THROWS_AS(map.add_vertex({0, 0, 0}, 0.5), MapError);
  CHECK_THROWS_AS(map.add_edge(a, a, {}, EdgeKind::LoopClosure, 0), MapError);
  CHECK_THROWS_AS(map.add_edge(a, 9, {}, EdgeKind::Sequential, 0), MapError);
  map.add_edge(a, b, {1, 0, 0}, EdgeKind::Sequential, 0);
  CHECK_THROWS_AS(map.add_edge(a, b, {1, 0, 0}, EdgeKind::Sequential, 0),
                  MapError);
  // A loop closure in parallel with a sequential edge is fine.
  CHECK_NOTHROW(map.add_edge(b, a, {1, 0, 0}, EdgeKind::LoopClosure, 0));
  CHECK_THROWS_AS(map.remove_vertex(a), MapError);
  CHECK_THROWS_AS(map.remove_edge(42), MapError);
  CHECK_THROWS_AS(map.vertex(42), MapError);
}

TEST_CASE("removal restores the previous structure") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    CognitiveMap map;
    const int n = 2 + static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) {
      map.add_vertex({static_cast<double>(k), 0, 0}, k);
    }
    for (int k = 0; k + 1 < n; ++k) {
      map.add_edge(k, k + 1, {1, 0, 0}, EdgeKind::Sequential, k);
    }
    const CognitiveMap before = map;
    const VertexId v = map.add_vertex({0, 1, 0}, n);
    const auto target = static_cast<VertexId>(rng() % n);
    const EdgeId e = map.add_edge(target, v, {1, 0, 0}, EdgeKind::LoopClosure, n);
    REQUIRE(map.adjacency_consistent());
    map.remove_edge(e);
    map.remove_vertex(v);
    REQUIRE(map.adjacency_consistent());
    REQUIRE(structurally_equal(map, before, 0.0));
    // Ids are never reused.
    REQUIRE(map.add_vertex({}, n + 1) == v + 1);
  }
}

TEST_CASE("reroute keeps id, kind and stamp") {
  CognitiveMap map;
  for (int k = 0; k < 3; ++k) map.add_vertex({}, 0);
  const EdgeId e = map.add_edge(0, 1, {1, 0, 0}, EdgeKind::LoopClosure, 4.5);
  map.reroute_edge(e, 2, 0, {2, 0.1, 0.2});
  const Edge& moved = map.edge(e);
  CHECK(moved.from == 2);
  CHECK(moved.to == 0);
  CHECK(moved.kind == EdgeKind::LoopClosure);
  CHECK(moved.stamp == 4.5);
  CHECK(moved.constraint == RelativeConstraint(2, 0.1, 0.2));
  CHECK(map.incident_edges(1).empty());
  CHECK(map.adjacency_consistent());
}

TEST_CASE("copies are independent") {
  CognitiveMap map;
  map.add_vertex({1, 2, 0.3}, 0);
  const auto snap = map.snapshot();
  map.set_pose(0, {5, 5, 0});
  CHECK(snap->vertex(0).pose == Pose2(1, 2, 0.3));
  CHECK_FALSE(structurally_equal(*snap, map, 1e-9));
}
