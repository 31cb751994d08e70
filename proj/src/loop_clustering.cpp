#include "compact_map/loop_clustering.hpp"

#include <cmath>

#include "compact_map/error.hpp"

namespace compact_map {

void ClusterConfig::validate() const {
  if (!(t_interval > 0.0) || !(t_total > 0.0)) {
    throw DomainError("cluster thresholds must be > 0");
  }
  if (t_total < t_interval) {
    throw DomainError("t_total must be >= t_interval");
  }
}

LoopClusterManager::LoopClusterManager(ClusterConfig cfg) : cfg_(cfg) {
  cfg_.validate();
}

AssignResult LoopClusterManager::assign(EdgeId edge, double stamp) {
  if (!std::isfinite(stamp)) {
    throw DomainError("assign: non-finite stamp");
  }
  if (last_stamp_ && stamp < *last_stamp_) {
    throw DomainError("assign: loop-closure stamps must be non-decreasing");
  }
  last_stamp_ = stamp;

  if (open_ && stamp - open_->t_last <= cfg_.t_interval &&
      stamp - open_->t_start <= cfg_.t_total) {
    open_->edges.push_back(edge);
    open_->stamps.push_back(stamp);
    open_->t_last = stamp;
    return Continued{};
  }

  NewCluster result;
  if (open_) {
    open_->state = ClusterState::Closed;
    result.closed = std::move(open_);
  }
  LoopCluster fresh;
  fresh.index = next_index_++;
  fresh.edges.push_back(edge);
  fresh.stamps.push_back(stamp);
  fresh.t_start = stamp;
  fresh.t_last = stamp;
  open_ = std::move(fresh);
  return result;
}

std::optional<LoopCluster> LoopClusterManager::flush() {
  if (!open_) {
    return std::nullopt;
  }
  std::optional<LoopCluster> out = std::move(open_);
  open_.reset();
  out->state = ClusterState::Closed;
  return out;
}

void LoopClusterManager::prune_missing(const CognitiveMap& map) {
  if (!open_) {
    return;
  }
  std::vector<EdgeId> edges;
  std::vector<double> stamps;
  for (std::size_t k = 0; k < open_->edges.size(); ++k) {
    if (map.has_edge(open_->edges[k])) {
      edges.push_back(open_->edges[k]);
      stamps.push_back(open_->stamps[k]);
    }
  }
  // Timing bookkeeping (t_start, t_last) is kept: clustering is defined on
  // the stream of closures, not on which edges survive integration.
  open_->edges = std::move(edges);
  open_->stamps = std::move(stamps);
}

OptimizeReport on_cluster_closed(CognitiveMap& map, const LoopCluster& cluster,
                                 const SolverConfig& cfg) {
  if (cluster.state != ClusterState::Closed) {
    throw DomainError("on_cluster_closed: cluster is still open");
  }
  return optimize(map, cfg);
}

}  // namespace compact_map
