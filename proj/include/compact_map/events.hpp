#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "compact_map/geometry.hpp"

namespace compact_map {

// One odometry step, expressed in the frame of the previous pose.
struct OdomEvent {
  RelativeConstraint step;
};

// Place recognition: the current pose matches the pose reached after
// `target_frame` odometry steps (frame 0 is the start pose). `constraint`
// goes from the current pose to that earlier pose.
struct LoopEvent {
  std::int64_t target_frame = 0;
  RelativeConstraint constraint;
};

struct SimEvent {
  double stamp = 0.0;
  std::variant<OdomEvent, LoopEvent> payload;

  bool is_odom() const { return std::holds_alternative<OdomEvent>(payload); }
  bool is_loop() const { return std::holds_alternative<LoopEvent>(payload); }
};

using EventStream = std::vector<SimEvent>;

}  // namespace compact_map
