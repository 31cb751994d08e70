#include "compact_map/serialized_map.hpp"

namespace compact_map {

std::future<OptimizeReport> SerializedMap::submit_cluster_job(
    LoopCluster cluster, SolverConfig cfg,
    std::function<void(CognitiveMap&, const LoopCluster&)> after) {
  return std::async(std::launch::async,
                    [this, cluster = std::move(cluster), cfg = std::move(cfg),
                     after = std::move(after)] {
                      std::lock_guard lock(mutex_);
                      OptimizeReport report =
                          on_cluster_closed(map_, cluster, cfg);
                      if (after) {
                        after(map_, cluster);
                      }
                      return report;
                    });
}

}  // namespace compact_map
