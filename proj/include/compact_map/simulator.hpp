#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "compact_map/events.hpp"
#include "compact_map/geometry.hpp"

namespace compact_map {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct OdometryNoise {
  double sigma_d = 0.0;      // m per step
  double sigma_theta = 0.0;  // rad per step
};

struct SimConfig {
  std::uint64_t seed = 1;
  // Closed polyline; the last waypoint connects back to the first.
  std::vector<Point2> route;
  double speed = 0.25;   // m/s
  double step_dt = 0.2;  // s
  OdometryNoise odom_noise;
  OdometryNoise loop_noise;
  double loop_detect_radius = 0.1;      // m
  double loop_heading_tolerance = 0.5;  // rad
  int laps = 1;

  void validate() const;
};

struct SimResult {
  EventStream events;
  // ground_truth[k] is the true pose after k odometry steps.
  std::vector<Pose2> ground_truth;
  std::size_t steps_per_lap = 0;
};

// Drives the route at constant speed, lap after lap, and records noisy
// odometry plus loop closures whenever the true pose is back within
// loop_detect_radius and loop_heading_tolerance of a pose visited at least
// one lap earlier (the closest such pose, earliest on ties).
//
// The step length is adjusted so that a lap is an integer number of steps,
// which makes noiseless laps coincide exactly.
//
// Randomness: std::mt19937_64 seeded with `seed`; a uniform is the top 53
// bits of one draw scaled by 2^-53; a standard normal is the cosine branch
// of Box-Muller over two uniforms u1, u2 as sqrt(-2 ln(1 - u1)) cos(2 pi u2).
// Per step, the d noise is drawn before the facing noise; loop noise is
// drawn the same way after the step's odometry noise.
SimResult generate(const SimConfig& cfg);

// "square", "figure-eight", "irat-maze-like".
SimConfig preset(std::string_view name);
std::vector<std::string> preset_names();

// Pose on the closed route at arc length s (heading along the segment).
Pose2 route_pose(const std::vector<Point2>& route, double s);
double route_length(const std::vector<Point2>& route);

}  // namespace compact_map
