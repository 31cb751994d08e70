#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/geometry.hpp"

namespace compact_map {

enum class Loss { Quadratic, Huber };

struct SolverConfig {
  Loss loss = Loss::Huber;
  double huber_delta = 1.0;
  int max_iterations = 100;
  double gradient_tolerance = 1e-10;
  double relative_cost_tolerance = 1e-8;
  double initial_damping = 1e-4;
  double damping_up = 10.0;
  double damping_down = 10.0;
  // Vertex held fixed to remove the gauge freedom. Defaults to the lowest id
  // present in the map.
  std::optional<VertexId> anchor;
  // Evaluate residual blocks and cost with the OpenMP kernels.
  bool parallel = true;
  // Scalar multiplier of each edge's robust cost. Unit weights when empty.
  std::function<double(const Edge&)> edge_weight;

  // Throws DomainError on an invalid setting.
  void validate() const;
};

struct OptimizeReport {
  int iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  bool converged = false;
};

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

// Pose-graph residual of one edge:
//   [x_j - x_i - d cos(theta_i + heading),
//    y_j - y_i - d sin(theta_i + heading),
//    wrap(theta_j - theta_i - facing)]
Vector3 residual(const Pose2& from, const Pose2& to,
                 const RelativeConstraint& c);

struct ResidualJacobians {
  Matrix3 wrt_from;
  Matrix3 wrt_to;
};

ResidualJacobians residual_jacobians(const Pose2& from, const Pose2& to,
                                     const RelativeConstraint& c);

// Huber loss on a squared norm s: s inside delta^2, 2 delta sqrt(s) - delta^2
// outside.
double huber_rho(double squared_norm, double delta);
// Derivative of huber_rho with respect to s: 1 inside, delta / sqrt(s)
// outside. Scales an edge's normal-equation contribution.
double huber_weight(double squared_norm, double delta);

// Robust cost 0.5 * sum_e w_e rho(|r_e|^2) at the current poses.
double total_cost(const CognitiveMap& map, const SolverConfig& cfg);

// Sparse Levenberg-Marquardt over all vertex poses, anchor held fixed.
// Updates poses in place. Requires a weakly connected map containing the
// anchor.
OptimizeReport optimize(CognitiveMap& map, const SolverConfig& cfg);

}  // namespace compact_map
