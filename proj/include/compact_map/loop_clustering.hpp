#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/optimizer.hpp"

namespace compact_map {

struct ClusterConfig {
  double t_interval = 2.0;  // max gap between consecutive loop edges, s
  double t_total = 100.0;   // max span of one cluster, s

  void validate() const;
};

enum class ClusterState { Open, Closed };

struct LoopCluster {
  std::size_t index = 0;  // 0-based order of creation
  std::vector<EdgeId> edges;
  std::vector<double> stamps;
  double t_start = 0.0;
  double t_last = 0.0;
  ClusterState state = ClusterState::Open;
};

struct Continued {};
struct NewCluster {
  // The cluster that was open before this edge, now closed. Empty when this
  // edge opened the very first cluster (or the first after a flush).
  std::optional<LoopCluster> closed;
};
using AssignResult = std::variant<Continued, NewCluster>;

// Incrementally groups loop-closure edges by time. An edge joins the open
// cluster when its gap to the previous edge is <= t_interval and its
// distance to the cluster start is <= t_total; otherwise the open cluster is
// closed and a new one starts.
class LoopClusterManager {
 public:
  explicit LoopClusterManager(ClusterConfig cfg = {});

  // Throws DomainError when stamp precedes the previous loop edge.
  AssignResult assign(EdgeId edge, double stamp);

  // Closes and returns the open cluster, if any.
  std::optional<LoopCluster> flush();

  const std::optional<LoopCluster>& open_cluster() const { return open_; }
  std::size_t clusters_created() const { return next_index_; }
  const ClusterConfig& config() const { return cfg_; }

  // Drops edge ids of the open cluster that are no longer in the map.
  void prune_missing(const CognitiveMap& map);

 private:
  ClusterConfig cfg_;
  std::optional<LoopCluster> open_;
  std::optional<double> last_stamp_;
  std::size_t next_index_ = 0;
};

// Batch optimization triggered by a closed cluster: exactly one optimize
// call over the whole map.
OptimizeReport on_cluster_closed(CognitiveMap& map, const LoopCluster& cluster,
                                 const SolverConfig& cfg);

}  // namespace compact_map
