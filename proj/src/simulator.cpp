#include "compact_map/simulator.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "compact_map/error.hpp"

namespace compact_map {

void SimConfig::validate() const {
  if (route.size() < 2) {
    throw DomainError("route needs at least 2 waypoints");
  }
  if (!(route_length(route) > 0.0)) {
    throw DomainError("route has zero length");
  }
  if (!(speed > 0.0) || !(step_dt > 0.0)) {
    throw DomainError("speed and step_dt must be > 0");
  }
  if (!(odom_noise.sigma_d >= 0.0) || !(odom_noise.sigma_theta >= 0.0) ||
      !(loop_noise.sigma_d >= 0.0) || !(loop_noise.sigma_theta >= 0.0)) {
    throw DomainError("noise sigmas must be >= 0");
  }
  if (!(loop_detect_radius > 0.0) || !(loop_heading_tolerance >= 0.0)) {
    throw DomainError("loop detection radius must be > 0");
  }
  if (laps < 1) {
    throw DomainError("laps must be >= 1");
  }
}

namespace {

class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

Point2 waypoint(const std::vector<Point2>& route, std::size_t k) {
  return route[k % route.size()];
}

RelativeConstraint add_noise(const RelativeConstraint& c,
                             const OdometryNoise& noise, Gaussian& rng) {
  const double zd = rng.normal();
  const double zt = rng.normal();
  return RelativeConstraint(std::abs(c.d() + noise.sigma_d * zd), c.heading(),
                            c.facing() + noise.sigma_theta * zt);
}

}  // namespace

double route_length(const std::vector<Point2>& route) {
  double length = 0.0;
  for (std::size_t k = 0; k < route.size(); ++k) {
    const Point2 a = waypoint(route, k);
    const Point2 b = waypoint(route, k + 1);
    length += std::hypot(b.x - a.x, b.y - a.y);
  }
  return length;
}

Pose2 route_pose(const std::vector<Point2>& route, double s) {
  const double total = route_length(route);
  s = std::fmod(s, total);
  if (s < 0.0) {
    s += total;
  }
  for (std::size_t k = 0; k < route.size(); ++k) {
    const Point2 a = waypoint(route, k);
    const Point2 b = waypoint(route, k + 1);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) {
      continue;
    }
    if (s < len || k + 1 == route.size()) {
      const double t = std::min(s / len, 1.0);
      return Pose2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
                   std::atan2(b.y - a.y, b.x - a.x));
    }
    s -= len;
  }
  throw DomainError("route_pose: degenerate route");
}

SimResult generate(const SimConfig& cfg) {
  cfg.validate();
  const double length = route_length(cfg.route);
  const auto steps_per_lap = static_cast<std::size_t>(
      std::max(1.0, std::round(length / (cfg.speed * cfg.step_dt))));
  const std::size_t total_steps =
      steps_per_lap * static_cast<std::size_t>(cfg.laps);

  SimResult out;
  out.steps_per_lap = steps_per_lap;
  out.ground_truth.reserve(total_steps + 1);
  for (std::size_t k = 0; k <= total_steps; ++k) {
    const double s = static_cast<double>(k % steps_per_lap) * length /
                     static_cast<double>(steps_per_lap);
    out.ground_truth.push_back(route_pose(cfg.route, s));
  }

  Gaussian rng(cfg.seed);
  const auto& truth = out.ground_truth;
  for (std::size_t n = 1; n <= total_steps; ++n) {
    const double stamp = static_cast<double>(n) * cfg.step_dt;
    out.events.push_back(
        {stamp, OdomEvent{add_noise(between(truth[n - 1], truth[n]),
                                    cfg.odom_noise, rng)}});
    if (n < steps_per_lap) {
      continue;
    }
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m + steps_per_lap <= n; ++m) {
      const double dist = distance(truth[n], truth[m]);
      if (dist <= cfg.loop_detect_radius && dist < best_dist &&
          angular_distance(truth[n].theta(), truth[m].theta()) <=
              cfg.loop_heading_tolerance) {
        best = m;
        best_dist = dist;
      }
    }
    if (std::isfinite(best_dist)) {
      out.events.push_back(
          {stamp + 0.5 * cfg.step_dt,
           LoopEvent{static_cast<std::int64_t>(best),
                     add_noise(between(truth[n], truth[best]), cfg.loop_noise,
                               rng)}});
    }
  }
  return out;
}

SimConfig preset(std::string_view name) {
  SimConfig cfg;
  if (name == "square") {
    cfg.route = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  } else if (name == "figure-eight") {
    // Diagonals cross at (1, 1) with headings 90 degrees apart.
    cfg.route = {{0, 0}, {2, 2}, {2, 0}, {0, 2}};
  } else if (name == "irat-maze-like") {
    // Corridors meeting at T and X junctions; the descent along x = 2
    // crosses the first corridor.
    cfg.route = {{0, 0}, {4, 0}, {4, 3}, {2, 3}, {2, -1}, {0, -1}};
    cfg.odom_noise = {0.002, 0.002};
    cfg.laps = 3;
  } else {
    throw DomainError("unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"square", "figure-eight", "irat-maze-like"};
}

}  // namespace compact_map
