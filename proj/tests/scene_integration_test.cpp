#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "compact_map/error.hpp"
#include "compact_map/scene_integration.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compact_map;
using doctest::Approx;

namespace {

void check_constraint(const RelativeConstraint& got,
                      const RelativeConstraint& want) {
  CHECK(got.d() == Approx(want.d()).epsilon(1e-9));
  CHECK(angular_distance(got.heading(), want.heading()) <= 1e-9);
  CHECK(angular_distance(got.facing(), want.facing()) <= 1e-9);
}

LoopCluster closed_cluster(std::vector<EdgeId> edges, double t0, double t1) {
  LoopCluster c;
  c.edges = std::move(edges);
  c.t_start = t0;
  c.t_last = t1;
  c.state = ClusterState::Closed;
  return c;
}

void add_seq(CognitiveMap& map, VertexId a, VertexId b) {
  map.add_edge(a, b, between(map.vertex(a).pose, map.vertex(b).pose),
               EdgeKind::Sequential, map.vertex(b).stamp);
}

EdgeId add_loop(CognitiveMap& map, VertexId a, VertexId b, double stamp) {
  return map.add_edge(a, b, between(map.vertex(a).pose, map.vertex(b).pose),
                      EdgeKind::LoopClosure, stamp);
}

// Every edge agrees with the poses it joins.
double worst_inconsistency(const CognitiveMap& map) {
  double worst = 0.0;
  for (const auto& [id, e] : map.edges()) {
    const Pose2 p = predict(map.vertex(e.from).pose, e.constraint);
    const Pose2& q = map.vertex(e.to).pose;
    worst = std::max({worst, distance(p, q), angular_distance(p.theta(), q.theta())});
  }
  return worst;
}

// Laps of a closed square, 8 vertices per lap, each lap-n vertex joined by
// a loop closure to its lap-1 twin.
struct Laps {
  CognitiveMap map;
  std::vector<std::vector<EdgeId>> loops_per_lap;
};

Laps square_laps(int laps) {
  Laps out;
  std::vector<Pose2> lap;
  for (int s = 0; s < 4; ++s) {
    const double th = s * kPi / 2;
    const Pose2 corner = s == 0 ? Pose2(0, 0, 0)
                       : s == 1 ? Pose2(1, 0, th)
                       : s == 2 ? Pose2(1, 1, th)
                                : Pose2(0, 1, th);
    lap.push_back(corner);
    lap.push_back(predict(corner, {0.5, 0, 0}));
  }
  double t = 0.0;
  for (int l = 0; l < laps; ++l) {
    out.loops_per_lap.emplace_back();
    for (int k = 0; k < 8; ++k) {
      const VertexId v = out.map.add_vertex(lap[k], t);
      if (v > 0) add_seq(out.map, v - 1, v);
      if (l > 0) out.loops_per_lap.back().push_back(add_loop(out.map, v, k, t));
      t += 1.0;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("loop endpoints too far apart are left alone") {
  CognitiveMap map;
  map.add_vertex({0, 0, 0}, 0);
  map.add_vertex({1, 0, 0}, 1);
  map.add_vertex({0.5, 0, 0}, 2);
  add_seq(map, 0, 1);
  add_seq(map, 1, 2);
  const EdgeId loop = add_loop(map, 2, 0, 2);
  const CognitiveMap before = map;
  const IntegrationConfig cfg;  // 0.5 m = 10 merge radii
  const auto rep = integrate_cluster(map, closed_cluster({loop}, 2, 2), cfg);
  CHECK(rep.removed_vertices == 0);
  CHECK(rep.removed_edges == 0);
  CHECK(structurally_equal(map, before, 0.0));
}

TEST_CASE("three edges around a revisit become two") {
  // k old, i -> v -> j a later pass; v sits on k.
  CognitiveMap map;
  const VertexId k = map.add_vertex({0, 0, 0}, 0);
  const VertexId b = map.add_vertex({-0.5, -0.5, kPi}, 1);
  const VertexId i = map.add_vertex({-1, 0, 0}, 2);
  const VertexId v = map.add_vertex({0, 0, kPi / 2}, 3);
  const VertexId j = map.add_vertex({0, 1, kPi / 2}, 4);
  add_seq(map, k, b);
  add_seq(map, b, i);
  map.add_edge(i, v, {1, 0, kPi / 2}, EdgeKind::Sequential, 3);
  map.add_edge(v, j, {1, 0, 0}, EdgeKind::Sequential, 4);
  const EdgeId loop = map.add_edge(v, k, {0, 0, -kPi / 2}, EdgeKind::LoopClosure, 4);

  const auto rep =
      integrate_cluster(map, closed_cluster({loop}, 10, 10), IntegrationConfig{});
  CHECK(map.vertex_count() == 4);
  CHECK(map.edge_count() == 4);
  CHECK_FALSE(map.has_vertex(v));
  CHECK(rep.removed_vertex_ids == std::vector<VertexId>{v});
  CHECK(rep.merged_edges == 2);
  REQUIRE(map.find_sequential(i, k).has_value());
  REQUIRE(map.find_sequential(k, j).has_value());
  // Forward 1 then quarter turn, then undo the quarter turn: straight 1 m.
  check_constraint(map.edge(*map.find_sequential(i, k)).constraint, {1, 0, 0});
  // Quarter turn in place, then forward 1 m.
  check_constraint(map.edge(*map.find_sequential(k, j)).constraint,
                   {1, kPi / 2, kPi / 2});
  CHECK(map.is_weakly_connected());
  CHECK(worst_inconsistency(map) <= 1e-9);
}

TEST_CASE("several loop closures into one old vertex") {
  CognitiveMap map;
  map.add_vertex({0, 0, 0}, 0);     // 0: old place
  map.add_vertex({1, 0, 0}, 1);     // 1
  map.add_vertex({0.01, 0, 0}, 2);  // 2: back near 0
  map.add_vertex({0.02, 0, 0}, 3);  // 3: still near 0
  map.add_vertex({1, 0, 0.1}, 4);   // 4
  add_seq(map, 0, 1);
  add_seq(map, 1, 2);
  add_seq(map, 2, 3);
  add_seq(map, 3, 4);
  const EdgeId l2 = add_loop(map, 2, 0, 2);
  const EdgeId l3 = add_loop(map, 3, 0, 3);
  const auto rep =
      integrate_cluster(map, closed_cluster({l2, l3}, 10, 10), IntegrationConfig{});
  CHECK(rep.removed_vertices == 2);
  CHECK(map.vertex_count() == 3);
  // 1->2 would come back as 1->0 next to 0->1 and collapses onto it.
  CHECK(map.edge_count() == 2);
  CHECK(map.find_sequential(0, 1).has_value());
  CHECK(map.find_sequential(0, 4).has_value());
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& [id, e] : map.edges()) {
    CHECK(seen.insert({e.from, e.to}).second);
  }
  CHECK(map.is_weakly_connected());
  CHECK(worst_inconsistency(map) <= 1e-9);
}

TEST_CASE("interior revisit between two merged places is dropped") {
  CognitiveMap map;
  map.add_vertex({0, 0, 0}, 0);
  map.add_vertex({1, 0, 0}, 1);
  map.add_vertex({0, 0, 0}, 2);
  map.add_vertex({0.5, 0.01, 0}, 3);
  map.add_vertex({1, 0, 0}, 4);
  add_seq(map, 0, 1);
  add_seq(map, 1, 2);
  add_seq(map, 2, 3);
  add_seq(map, 3, 4);
  const EdgeId la = add_loop(map, 2, 0, 2);
  const EdgeId lb = add_loop(map, 4, 1, 4);
  const auto rep =
      integrate_cluster(map, closed_cluster({la, lb}, 2, 4), IntegrationConfig{});
  CHECK(map.vertex_count() == 2);
  CHECK(map.edge_count() == 1);
  CHECK(rep.removed_vertex_ids == std::vector<VertexId>{2, 4, 3});
  CHECK(map.find_sequential(0, 1).has_value());
}

TEST_CASE("repeated laps of a square keep the first lap only") {
  for (int laps = 2; laps <= 4; ++laps) {
    Laps l = square_laps(laps);
    for (int lap = 1; lap < laps; ++lap) {
      const auto& ids = l.loops_per_lap[static_cast<std::size_t>(lap)];
      integrate_cluster(l.map, closed_cluster(ids, 8.0 * lap, 8.0 * lap + 7),
                        IntegrationConfig{});
      // Later laps are still waiting for their own cluster.
      const auto remaining = static_cast<std::size_t>(8 * (laps - lap));
      REQUIRE(l.map.vertex_count() == remaining);
      // Each waiting vertex brings one sequential edge and one loop.
      REQUIRE(l.map.edge_count() == 2 * remaining - 8);
      REQUIRE(l.map.is_weakly_connected());
    }
    REQUIRE(l.map.vertex_count() == 8);
    REQUIRE(l.map.edge_count() == 8);
    for (const auto& [id, v] : l.map.vertices()) REQUIRE(id < 8);
    REQUIRE(worst_inconsistency(l.map) <= 1e-9);
  }
}

TEST_CASE("short edge in a chain is collapsed") {
  CognitiveMap map;
  map.add_vertex({0, 0, 0}, 0);
  map.add_vertex({0.01, 0, 0}, 1);
  map.add_vertex({1.01, 0, 0}, 2);
  add_seq(map, 0, 1);
  add_seq(map, 1, 2);
  const auto rep = remove_short_edges(map, IntegrationConfig{});
  CHECK(rep.removed_vertex_ids == std::vector<VertexId>{1});
  REQUIRE(map.edge_count() == 1);
  const Edge& e = map.edges().begin()->second;
  CHECK(e.from == 0);
  CHECK(e.to == 2);
  check_constraint(e.constraint, {1.01, 0, 0});
}

TEST_CASE("short edge with a parallel constraint") {
  CognitiveMap map;
  map.add_vertex({0, 0, 0}, 0);
  map.add_vertex({0.01, 0, 0}, 1);
  map.add_vertex({1, 0, 0}, 2);
  const EdgeId e01 = map.add_edge(0, 1, {0.01, 0, 0}, EdgeKind::Sequential, 1);
  const EdgeId e12 = map.add_edge(1, 2, {0.99, 0, 0}, EdgeKind::Sequential, 2);
  const EdgeId loop = add_loop(map, 2, 1, 2);
  const auto rep = remove_short_edges(map, IntegrationConfig{});
  CHECK(rep.removed_vertex_ids == std::vector<VertexId>{1});
  std::vector<EdgeId> removed = rep.removed_edge_ids;
  std::sort(removed.begin(), removed.end());
  CHECK(removed == std::vector<EdgeId>{e01, e12});
  REQUIRE(map.has_edge(loop));
  CHECK(map.edge(loop).from == 2);
  CHECK(map.edge(loop).to == 0);
  CHECK(map.is_weakly_connected());
}

TEST_CASE("no short edges leaves the map unchanged") {
  CognitiveMap map = oracle::loop_graph(oracle::square_loop_truth(8, 2.0));
  const CognitiveMap before = map;
  const auto rep = remove_short_edges(map, IntegrationConfig{});
  CHECK(rep.removed_vertices == 0);
  CHECK(structurally_equal(map, before, 0.0));
}

TEST_CASE("integration properties on random revisiting graphs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> step(0.005, 0.4);
  std::uniform_real_distribution<double> turn(-1.0, 1.0);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  const IntegrationConfig cfg;
  for (int trial = 0; trial < 300; ++trial) {
    CognitiveMap map;
    std::vector<EdgeId> loops;
    map.add_vertex({}, 0);
    const int n = 5 + static_cast<int>(rng() % 40);
    for (int k = 1; k < n; ++k) {
      const VertexId prev = k - 1;
      Pose2 next;
      std::optional<VertexId> revisit;
      if (k > 3 && rng() % 3 == 0) {
        revisit = static_cast<VertexId>(rng() % (k - 2));
        const Pose2& old = map.vertex(*revisit).pose;
        next = Pose2(old.x() + jitter(rng), old.y() + jitter(rng),
                     old.theta() + jitter(rng));
      } else {
        next = predict(map.vertex(prev).pose, {step(rng), turn(rng), turn(rng)});
      }
      const VertexId v = map.add_vertex(next, k);
      add_seq(map, prev, v);
      if (revisit) loops.push_back(add_loop(map, v, *revisit, k));
    }
    const std::size_t v0 = map.vertex_count();
    const std::size_t e0 = map.edge_count();
    integrate_cluster(map, closed_cluster(loops, 0, n), cfg);
    REQUIRE(map.vertex_count() <= v0);
    REQUIRE(map.edge_count() <= e0);
    REQUIRE(map.is_weakly_connected());
    REQUIRE(map.adjacency_consistent());
    REQUIRE(worst_inconsistency(map) <= 1e-9);
    {
      const CognitiveMap once = map;
      const auto again = integrate_cluster(map, closed_cluster(loops, 0, n), cfg);
      REQUIRE(again.removed_vertices + again.removed_edges == 0);
      REQUIRE(structurally_equal(map, once, 0.0));
    }
    const std::size_t v1 = map.vertex_count();
    const std::size_t e1 = map.edge_count();
    remove_short_edges(map, cfg);
    REQUIRE(map.vertex_count() <= v1);
    REQUIRE(map.edge_count() <= e1);
    REQUIRE(map.is_weakly_connected());
    REQUIRE(worst_inconsistency(map) <= 1e-9);
    for (const auto& [id, e] : map.edges()) {
      REQUIRE((e.kind != EdgeKind::Sequential ||
               e.constraint.d() > cfg.short_edge_threshold));
    }

    const CognitiveMap settled = map;
    const auto again_short = remove_short_edges(map, cfg);
    REQUIRE(again_short.removed_vertices + again_short.removed_edges == 0);
    REQUIRE(structurally_equal(map, settled, 0.0));
  }
}

TEST_CASE("config validation") {
  IntegrationConfig cfg;
  cfg.short_edge_threshold = 0.1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.merge_radius = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}
