#pragma once

#include <functional>
#include <future>
#include <mutex>
#include <utility>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/loop_clustering.hpp"
#include "compact_map/optimizer.hpp"

namespace compact_map {

// Owner of a map shared between the ingestion thread and a background
// optimization job. Every mutation runs under one mutex, so ingestion
// blocks while a cluster job holds the map; read-only snapshots can be
// taken at any time and used without locking.
class SerializedMap {
 public:
  SerializedMap() = default;
  explicit SerializedMap(CognitiveMap map) : map_(std::move(map)) {}

  SerializedMap(const SerializedMap&) = delete;
  SerializedMap& operator=(const SerializedMap&) = delete;

  template <typename Fn>
  decltype(auto) with_exclusive(Fn&& fn) {
    std::lock_guard lock(mutex_);
    return std::forward<Fn>(fn)(map_);
  }

  std::shared_ptr<const CognitiveMap> snapshot() const {
    std::lock_guard lock(mutex_);
    return map_.snapshot();
  }

  // Optimizes the whole map for a closed cluster on a worker thread. The
  // job holds the map for its full duration. `after` (optional) runs under
  // the same lock right after optimization, e.g. scene integration.
  std::future<OptimizeReport> submit_cluster_job(
      LoopCluster cluster, SolverConfig cfg,
      std::function<void(CognitiveMap&, const LoopCluster&)> after = {});

 private:
  mutable std::mutex mutex_;
  CognitiveMap map_;
};

}  // namespace compact_map
