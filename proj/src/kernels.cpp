#include "compact_map/kernels.hpp"

#include <cassert>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace compact_map::kernels {

double rho(const LossSpec& loss, double squared_norm) {
  return loss.loss == Loss::Huber ? huber_rho(squared_norm, loss.delta)
                                  : squared_norm;
}

double rho_prime(const LossSpec& loss, double squared_norm) {
  return loss.loss == Loss::Huber ? huber_weight(squared_norm, loss.delta)
                                  : 1.0;
}

namespace {

inline void evaluate_one(std::span<const Pose2> poses, const EdgeTerm& t,
                         const LossSpec& loss, ResidualBlock& b) {
  const Pose2& from = poses[static_cast<std::size_t>(t.from_slot)];
  const Pose2& to = poses[static_cast<std::size_t>(t.to_slot)];
  b.edge = t.edge;
  b.r = residual(from, to, t.constraint);
  const ResidualJacobians j = residual_jacobians(from, to, t.constraint);
  b.jac_from = j.wrt_from;
  b.jac_to = j.wrt_to;
  const double s = b.r.squaredNorm();
  b.robust_weight = t.weight * rho_prime(loss, s);
  b.cost = 0.5 * t.weight * rho(loss, s);
}

inline double cost_one(std::span<const Pose2> poses, const EdgeTerm& t,
                       const LossSpec& loss) {
  const Vector3 r = residual(poses[static_cast<std::size_t>(t.from_slot)],
                             poses[static_cast<std::size_t>(t.to_slot)],
                             t.constraint);
  return 0.5 * t.weight * rho(loss, r.squaredNorm());
}

}  // namespace

namespace serial {

void evaluate_blocks(std::span<const Pose2> poses,
                     std::span<const EdgeTerm> terms, const LossSpec& loss,
                     std::span<ResidualBlock> out) {
  assert(out.size() == terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    evaluate_one(poses, terms[k], loss, out[k]);
  }
}

double total_cost(std::span<const Pose2> poses,
                  std::span<const EdgeTerm> terms, const LossSpec& loss) {
  double cost = 0.0;
  for (const EdgeTerm& t : terms) {
    cost += cost_one(poses, t, loss);
  }
  return cost;
}

}  // namespace serial

namespace parallel {

void evaluate_blocks(std::span<const Pose2> poses,
                     std::span<const EdgeTerm> terms, const LossSpec& loss,
                     std::span<ResidualBlock> out) {
  assert(out.size() == terms.size());
  const auto n = static_cast<std::ptrdiff_t>(terms.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    evaluate_one(poses, terms[static_cast<std::size_t>(k)], loss,
                 out[static_cast<std::size_t>(k)]);
  }
}

double total_cost(std::span<const Pose2> poses,
                  std::span<const EdgeTerm> terms, const LossSpec& loss) {
  const auto n = static_cast<std::ptrdiff_t>(terms.size());
  double cost = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : cost)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    cost += cost_one(poses, terms[static_cast<std::size_t>(k)], loss);
  }
  return cost;
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads([[maybe_unused]] int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

}  // namespace compact_map::kernels
