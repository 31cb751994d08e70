#include "compact_map/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "compact_map/error.hpp"
#include "compact_map/kernels.hpp"

namespace compact_map {

void SolverConfig::validate() const {
  if (!(huber_delta > 0.0)) {
    throw DomainError("huber_delta must be > 0");
  }
  if (max_iterations < 0) {
    throw DomainError("max_iterations must be >= 0");
  }
  if (!(gradient_tolerance > 0.0) || !(relative_cost_tolerance > 0.0)) {
    throw DomainError("solver tolerances must be > 0");
  }
  if (!(initial_damping > 0.0) || !(damping_up > 1.0) ||
      !(damping_down > 1.0)) {
    throw DomainError("damping must be > 0 with up/down factors > 1");
  }
}

Vector3 residual(const Pose2& from, const Pose2& to,
                 const RelativeConstraint& c) {
  const double dir = from.theta() + c.heading();
  return {to.x() - from.x() - c.d() * std::cos(dir),
          to.y() - from.y() - c.d() * std::sin(dir),
          wrap_angle(to.theta() - from.theta() - c.facing())};
}

ResidualJacobians residual_jacobians(const Pose2& from, const Pose2& /*to*/,
                                     const RelativeConstraint& c) {
  const double dir = from.theta() + c.heading();
  ResidualJacobians j;
  j.wrt_from << -1.0, 0.0, c.d() * std::sin(dir),  //
      0.0, -1.0, -c.d() * std::cos(dir),           //
      0.0, 0.0, -1.0;
  j.wrt_to = Matrix3::Identity();
  return j;
}

double huber_rho(double squared_norm, double delta) {
  if (squared_norm <= delta * delta) {
    return squared_norm;
  }
  return 2.0 * delta * std::sqrt(squared_norm) - delta * delta;
}

double huber_weight(double squared_norm, double delta) {
  if (squared_norm <= delta * delta) {
    return 1.0;
  }
  return delta / std::sqrt(squared_norm);
}

namespace {

// Solver-side view of the map: vertex slots in id order, 3 unknowns per
// non-anchor slot.
struct Problem {
  std::vector<VertexId> slot_ids;
  std::vector<Pose2> poses;
  std::vector<int> var_of_slot;  // -1 for the anchor
  std::vector<kernels::EdgeTerm> terms;
  kernels::LossSpec loss;
  int num_vars = 0;
};

Problem build_problem(const CognitiveMap& map, const SolverConfig& cfg,
                      VertexId anchor) {
  Problem p;
  std::unordered_map<VertexId, int> slot_of;
  slot_of.reserve(map.vertex_count());
  for (const auto& [id, v] : map.vertices()) {
    slot_of.emplace(id, static_cast<int>(p.slot_ids.size()));
    p.slot_ids.push_back(id);
    p.poses.push_back(v.pose);
    if (id == anchor) {
      p.var_of_slot.push_back(-1);
    } else {
      p.var_of_slot.push_back(p.num_vars++);
    }
  }
  p.terms.reserve(map.edge_count());
  for (const auto& [id, e] : map.edges()) {
    const double w = cfg.edge_weight ? cfg.edge_weight(e) : 1.0;
    p.terms.push_back({id, slot_of.at(e.from), slot_of.at(e.to),
                       e.constraint, w});
  }
  p.loss = {cfg.loss, cfg.huber_delta};
  return p;
}

double evaluate_cost(const Problem& p, std::span<const Pose2> poses,
                     bool parallel) {
  return parallel ? kernels::parallel::total_cost(poses, p.terms, p.loss)
                  : kernels::serial::total_cost(poses, p.terms, p.loss);
}

// Gauss-Newton normal equations J^T W J and J^T W r.
struct NormalEquations {
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd gradient;
};

void assemble(const Problem& p, std::span<const kernels::ResidualBlock> blocks,
              NormalEquations& ne) {
  ne.triplets.clear();
  ne.gradient.setZero(3 * p.num_vars);
  auto add_block = [&ne](int row_var, int col_var, const Matrix3& m) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        // Explicit zeros keep the sparsity pattern fixed across iterations.
        ne.triplets.emplace_back(3 * row_var + r, 3 * col_var + c, m(r, c));
      }
    }
  };
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const kernels::ResidualBlock& b = blocks[k];
    const int vi = p.var_of_slot[static_cast<std::size_t>(p.terms[k].from_slot)];
    const int vj = p.var_of_slot[static_cast<std::size_t>(p.terms[k].to_slot)];
    const double w = b.robust_weight;
    if (vi >= 0) {
      add_block(vi, vi, w * b.jac_from.transpose() * b.jac_from);
      ne.gradient.segment<3>(3 * vi) += w * b.jac_from.transpose() * b.r;
    }
    if (vj >= 0) {
      add_block(vj, vj, w * b.jac_to.transpose() * b.jac_to);
      ne.gradient.segment<3>(3 * vj) += w * b.jac_to.transpose() * b.r;
    }
    if (vi >= 0 && vj >= 0) {
      const Matrix3 off = w * b.jac_from.transpose() * b.jac_to;
      add_block(vi, vj, off);
      add_block(vj, vi, off.transpose());
    }
  }
}

void linearize(const Problem& p, std::span<const Pose2> poses, bool parallel,
               std::vector<kernels::ResidualBlock>& blocks,
               NormalEquations& ne) {
  if (parallel) {
    kernels::parallel::evaluate_blocks(poses, p.terms, p.loss, blocks);
  } else {
    kernels::serial::evaluate_blocks(poses, p.terms, p.loss, blocks);
  }
  assemble(p, blocks, ne);
}

constexpr double kMaxDamping = 1e16;

}  // namespace

double total_cost(const CognitiveMap& map, const SolverConfig& cfg) {
  if (map.empty()) {
    return 0.0;
  }
  const Problem p = build_problem(map, cfg, *map.lowest_vertex_id());
  return evaluate_cost(p, p.poses, cfg.parallel);
}

OptimizeReport optimize(CognitiveMap& map, const SolverConfig& cfg) {
  cfg.validate();
  OptimizeReport report;
  if (map.empty()) {
    report.converged = true;
    return report;
  }
  const VertexId anchor = cfg.anchor.value_or(*map.lowest_vertex_id());
  if (!map.has_vertex(anchor)) {
    throw MapError("optimize: anchor vertex " + std::to_string(anchor) +
                   " not in map");
  }
  if (!map.is_weakly_connected()) {
    throw MapError("optimize: map is not connected");
  }

  Problem p = build_problem(map, cfg, anchor);
  double cost = evaluate_cost(p, p.poses, cfg.parallel);
  if (!std::isfinite(cost)) {
    throw NumericalError("optimize: non-finite initial cost");
  }
  report.initial_cost = cost;

  std::vector<kernels::ResidualBlock> blocks(p.terms.size());
  NormalEquations ne;
  linearize(p, p.poses, cfg.parallel, blocks, ne);

  const int n = 3 * p.num_vars;
  Eigen::SparseMatrix<double> hessian(n, n);
  Eigen::SparseMatrix<double> damped(n, n);
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  bool pattern_ready = false;

  std::vector<Pose2> candidate(p.poses.size());
  double lambda = cfg.initial_damping;

  while (report.iterations < cfg.max_iterations) {
    if (n == 0 || ne.gradient.lpNorm<Eigen::Infinity>() <=
                      cfg.gradient_tolerance) {
      report.converged = true;
      break;
    }
    ++report.iterations;

    hessian.setFromTriplets(ne.triplets.begin(), ne.triplets.end());
    damped = hessian + lambda * identity;
    if (!pattern_ready) {
      solver.analyzePattern(damped);
      pattern_ready = true;
    }
    solver.factorize(damped);
    if (solver.info() != Eigen::Success) {
      lambda *= cfg.damping_up;
      if (lambda > kMaxDamping) {
        throw NumericalError("optimize: normal equations singular");
      }
      continue;
    }
    const Eigen::VectorXd step = solver.solve(-ne.gradient);
    if (solver.info() != Eigen::Success || !step.allFinite()) {
      throw NumericalError("optimize: linear solve failed");
    }

    for (std::size_t s = 0; s < p.poses.size(); ++s) {
      const int v = p.var_of_slot[s];
      const Pose2& cur = p.poses[s];
      if (v < 0) {
        candidate[s] = cur;
      } else {
        candidate[s] = Pose2(cur.x() + step(3 * v), cur.y() + step(3 * v + 1),
                             cur.theta() + step(3 * v + 2));
      }
    }
    const double new_cost = evaluate_cost(p, candidate, cfg.parallel);

    if (std::isfinite(new_cost) && new_cost < cost) {
      const double decrease = (cost - new_cost) / cost;
      p.poses.swap(candidate);
      cost = new_cost;
      lambda = std::max(lambda / cfg.damping_down, 1e-15);
      linearize(p, p.poses, cfg.parallel, blocks, ne);
      if (decrease <= cfg.relative_cost_tolerance) {
        report.converged = true;
        break;
      }
    } else {
      lambda *= cfg.damping_up;
      if (lambda > kMaxDamping) {
        // No descent step exists at machine precision.
        report.converged = true;
        break;
      }
    }
  }

  if (!std::isfinite(cost)) {
    throw NumericalError("optimize: non-finite cost");
  }
  for (std::size_t s = 0; s < p.slot_ids.size(); ++s) {
    map.set_pose(p.slot_ids[s], p.poses[s]);
  }
  report.final_cost = cost;
  return report;
}

}  // namespace compact_map
