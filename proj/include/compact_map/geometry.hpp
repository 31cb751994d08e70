#pragma once

#include <numbers>

namespace compact_map {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps any finite angle onto the half-open interval [-pi, pi).
// Throws DomainError for NaN or infinite input.
double wrap_angle(double a);

// Robot pose on SE(2). theta is kept in [-pi, pi) by every constructor and
// setter.
class Pose2 {
 public:
  Pose2() = default;
  Pose2(double x, double y, double theta);

  double x() const { return x_; }
  double y() const { return y_; }
  double theta() const { return theta_; }

  void set(double x, double y, double theta);

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

bool operator==(const Pose2& a, const Pose2& b);

// Relative constraint between two poses expressed in the frame of the first:
// travel d along direction `heading`, then end up rotated by `facing`.
// heading and facing differ in general because a place match can happen at a
// relative viewing angle. When d == 0 the heading is unobservable and is
// stored as 0.
class RelativeConstraint {
 public:
  RelativeConstraint() = default;
  // Throws DomainError on non-finite input or d < 0.
  RelativeConstraint(double d, double heading, double facing);

  static RelativeConstraint identity() { return {}; }

  double d() const { return d_; }
  double heading() const { return heading_; }
  double facing() const { return facing_; }

 private:
  double d_ = 0.0;
  double heading_ = 0.0;
  double facing_ = 0.0;
};

bool operator==(const RelativeConstraint& a, const RelativeConstraint& b);

// Displacement form of a constraint in the frame of the origin pose.
struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

Displacement constraint_to_xy(const RelativeConstraint& c);
RelativeConstraint xy_to_constraint(double dx, double dy, double dtheta);
inline RelativeConstraint xy_to_constraint(const Displacement& t) {
  return xy_to_constraint(t.dx, t.dy, t.dtheta);
}

// SE(2) composition: first c1, then c2 expressed in the frame reached by c1.
RelativeConstraint compose(const RelativeConstraint& c1,
                           const RelativeConstraint& c2);

// SE(2) inverse: compose(c, invert(c)) is the identity.
RelativeConstraint invert(const RelativeConstraint& c);

// The pose reached from p by applying c. This is the pose for which the
// pose-graph residual of (p, predict(p, c), c) vanishes.
Pose2 predict(const Pose2& p, const RelativeConstraint& c);

// The constraint c with predict(from, c) == to.
RelativeConstraint between(const Pose2& from, const Pose2& to);

// Euclidean distance between the positions of two poses.
double distance(const Pose2& a, const Pose2& b);

// Smallest absolute difference between two angles, in [0, pi].
double angular_distance(double a, double b);

}  // namespace compact_map
