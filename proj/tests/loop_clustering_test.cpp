#include <random>
#include <variant>
#include <vector>

#include "compact_map/error.hpp"
#include "compact_map/loop_clustering.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compact_map;

namespace {

std::vector<std::vector<double>> cluster_all(const std::vector<double>& stamps,
                                             ClusterConfig cfg = {}) {
  LoopClusterManager mgr(cfg);
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < stamps.size(); ++k) {
    const AssignResult r = mgr.assign(static_cast<EdgeId>(k), stamps[k]);
    if (const auto* n = std::get_if<NewCluster>(&r); n && n->closed) {
      out.push_back(n->closed->stamps);
    }
  }
  if (auto last = mgr.flush()) out.push_back(last->stamps);
  return out;
}

}  // namespace

TEST_CASE("clustering examples") {
  CHECK(cluster_all({0, 1, 2, 3}) ==
        std::vector<std::vector<double>>{{0, 1, 2, 3}});
  CHECK(cluster_all({0, 1, 5, 6}) ==
        std::vector<std::vector<double>>{{0, 1}, {5, 6}});
  std::vector<double> dense;
  for (int k = 0; k < 100; ++k) dense.push_back(k);
  dense.push_back(100.5);
  const auto split = cluster_all(dense);
  REQUIRE(split.size() == 2);
  CHECK(split[0].size() == 100);
  CHECK(split[1] == std::vector<double>{100.5});
  // Boundaries are inclusive.
  CHECK(cluster_all({0, 2, 4}).size() == 1);
  std::vector<double> exact;
  for (int k = 0; k <= 100; ++k) exact.push_back(k);
  CHECK(cluster_all(exact).size() == 1);
}

TEST_CASE("flush") {
  LoopClusterManager mgr;
  CHECK_FALSE(mgr.flush().has_value());
  mgr.assign(4, 1.0);
  const auto c = mgr.flush();
  REQUIRE(c.has_value());
  CHECK(c->edges == std::vector<EdgeId>{4});
  CHECK(c->state == ClusterState::Closed);
  CHECK_FALSE(mgr.open_cluster().has_value());
  // The next edge opens a fresh cluster with nothing to close.
  const AssignResult r = mgr.assign(5, 1.5);
  CHECK_FALSE(std::get<NewCluster>(r).closed.has_value());
  CHECK(mgr.clusters_created() == 2);
}

TEST_CASE("stamps must not go backwards") {
  LoopClusterManager mgr;
  mgr.assign(0, 3.0);
  CHECK_THROWS_AS(mgr.assign(1, 2.0), DomainError);
  CHECK_NOTHROW(mgr.assign(1, 3.0));
}

TEST_CASE("incremental clustering matches brute force") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> gap(0.0, 4.0);
  std::uniform_int_distribution<int> length(0, 200);
  for (int trial = 0; trial < 2000; ++trial) {
    ClusterConfig cfg;
    if (trial % 2 == 1) {
      cfg.t_interval = 0.5 + gap(rng);
      cfg.t_total = 5.0 + 10 * gap(rng);
    }
    std::vector<double> stamps;
    double t = gap(rng);
    for (int k = length(rng); k > 0; --k) {
      // Some repeated stamps and some gaps exactly at the boundary.
      const int pick = static_cast<int>(rng() % 10);
      if (pick == 0) t += 0.0;
      else if (pick == 1) t += cfg.t_interval;
      else t += gap(rng);
      stamps.push_back(t);
    }
    const auto labels =
        oracle::brute_force_clusters(stamps, cfg.t_interval, cfg.t_total);
    const auto clusters = cluster_all(stamps, cfg);
    std::vector<std::size_t> got;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      got.insert(got.end(), clusters[c].size(), c);
    }
    REQUIRE(got == labels);
  }
}

TEST_CASE("each closed cluster triggers one optimization") {
  CognitiveMap map = oracle::loop_graph(oracle::square_loop_truth(8, 2.0));
  LoopClusterManager mgr;
  int passes = 0;
  for (double t : {0.0, 1.0, 10.0}) {
    const AssignResult r = mgr.assign(7, t);
    if (const auto* n = std::get_if<NewCluster>(&r); n && n->closed) {
      on_cluster_closed(map, *n->closed, {});
      ++passes;
    }
  }
  if (auto c = mgr.flush()) {
    on_cluster_closed(map, *c, {});
    ++passes;
  }
  CHECK(passes == 2);
  LoopCluster open;
  CHECK_THROWS_AS(on_cluster_closed(map, open, {}), DomainError);
}

TEST_CASE("pruning drops edges that left the map") {
  CognitiveMap map;
  map.add_vertex({}, 0);
  map.add_vertex({}, 0);
  const EdgeId a = map.add_edge(0, 1, {}, EdgeKind::LoopClosure, 0);
  const EdgeId b = map.add_edge(1, 0, {}, EdgeKind::LoopClosure, 0);
  LoopClusterManager mgr;
  mgr.assign(a, 0);
  mgr.assign(b, 1);
  map.remove_edge(a);
  mgr.prune_missing(map);
  CHECK(mgr.open_cluster()->edges == std::vector<EdgeId>{b});
}
