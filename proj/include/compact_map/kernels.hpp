#pragma once

// Per-edge evaluation kernels of the solver. Each kernel has a serial
// reference implementation and an OpenMP one; the two must agree (blocks
// exactly, reduced cost up to summation order).

#include <span>
#include <vector>

#include "compact_map/cognitive_map.hpp"
#include "compact_map/optimizer.hpp"

namespace compact_map::kernels {

// An edge resolved against the solver's vertex slots.
struct EdgeTerm {
  EdgeId edge = 0;
  int from_slot = 0;
  int to_slot = 0;
  RelativeConstraint constraint;
  double weight = 1.0;
};

struct LossSpec {
  Loss loss = Loss::Huber;
  double delta = 1.0;
};

struct ResidualBlock {
  EdgeId edge = 0;
  Vector3 r = Vector3::Zero();
  Matrix3 jac_from = Matrix3::Zero();
  Matrix3 jac_to = Matrix3::Zero();
  // weight * rho'(|r|^2): the scale applied to J^T J and J^T r.
  double robust_weight = 1.0;
  // 0.5 * weight * rho(|r|^2)
  double cost = 0.0;
};

double rho(const LossSpec& loss, double squared_norm);
double rho_prime(const LossSpec& loss, double squared_norm);

namespace serial {
void evaluate_blocks(std::span<const Pose2> poses,
                     std::span<const EdgeTerm> terms, const LossSpec& loss,
                     std::span<ResidualBlock> out);
double total_cost(std::span<const Pose2> poses,
                  std::span<const EdgeTerm> terms, const LossSpec& loss);
}  // namespace serial

namespace parallel {
void evaluate_blocks(std::span<const Pose2> poses,
                     std::span<const EdgeTerm> terms, const LossSpec& loss,
                     std::span<ResidualBlock> out);
double total_cost(std::span<const Pose2> poses,
                  std::span<const EdgeTerm> terms, const LossSpec& loss);
}  // namespace parallel

// Number of threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace compact_map::kernels
