#include "compact_map/geometry.hpp"

#include <cmath>

#include "compact_map/error.hpp"

namespace compact_map {

double wrap_angle(double a) {
  if (!std::isfinite(a)) {
    throw DomainError("wrap_angle: non-finite angle");
  }
  if (a >= -kPi && a < kPi) {
    return a;
  }
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  r -= kPi;
  // fmod is exact but the shifts round; clamp back into the half-open range.
  if (r >= kPi) {
    r -= kTwoPi;
  }
  if (r < -kPi) {
    r = -kPi;
  }
  return r;
}

Pose2::Pose2(double x, double y, double theta) { set(x, y, theta); }

void Pose2::set(double x, double y, double theta) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("Pose2: non-finite position");
  }
  x_ = x;
  y_ = y;
  theta_ = wrap_angle(theta);
}

bool operator==(const Pose2& a, const Pose2& b) {
  return a.x() == b.x() && a.y() == b.y() && a.theta() == b.theta();
}

RelativeConstraint::RelativeConstraint(double d, double heading,
                                       double facing) {
  if (!std::isfinite(d) || d < 0.0) {
    throw DomainError("RelativeConstraint: distance must be finite and >= 0");
  }
  d_ = d;
  heading_ = d == 0.0 ? 0.0 : wrap_angle(heading);
  facing_ = wrap_angle(facing);
}

bool operator==(const RelativeConstraint& a, const RelativeConstraint& b) {
  return a.d() == b.d() && a.heading() == b.heading() &&
         a.facing() == b.facing();
}

Displacement constraint_to_xy(const RelativeConstraint& c) {
  return {c.d() * std::cos(c.heading()), c.d() * std::sin(c.heading()),
          c.facing()};
}

RelativeConstraint xy_to_constraint(double dx, double dy, double dtheta) {
  const double d = std::hypot(dx, dy);
  const double heading = d == 0.0 ? 0.0 : std::atan2(dy, dx);
  return RelativeConstraint(d, heading, dtheta);
}

RelativeConstraint compose(const RelativeConstraint& c1,
                           const RelativeConstraint& c2) {
  const Displacement a = constraint_to_xy(c1);
  const Displacement b = constraint_to_xy(c2);
  const double c = std::cos(c1.facing());
  const double s = std::sin(c1.facing());
  return xy_to_constraint(a.dx + c * b.dx - s * b.dy,
                          a.dy + s * b.dx + c * b.dy,
                          wrap_angle(c1.facing() + c2.facing()));
}

RelativeConstraint invert(const RelativeConstraint& c) {
  const Displacement t = constraint_to_xy(c);
  const double cf = std::cos(c.facing());
  const double sf = std::sin(c.facing());
  return xy_to_constraint(-cf * t.dx - sf * t.dy, sf * t.dx - cf * t.dy,
                          -c.facing());
}

Pose2 predict(const Pose2& p, const RelativeConstraint& c) {
  const double dir = p.theta() + c.heading();
  return Pose2(p.x() + c.d() * std::cos(dir), p.y() + c.d() * std::sin(dir),
               p.theta() + c.facing());
}

RelativeConstraint between(const Pose2& from, const Pose2& to) {
  const double gx = to.x() - from.x();
  const double gy = to.y() - from.y();
  const double c = std::cos(from.theta());
  const double s = std::sin(from.theta());
  return xy_to_constraint(c * gx + s * gy, -s * gx + c * gy,
                          wrap_angle(to.theta() - from.theta()));
}

double distance(const Pose2& a, const Pose2& b) {
  return std::hypot(b.x() - a.x(), b.y() - a.y());
}

double angular_distance(double a, double b) {
  return std::abs(wrap_angle(a - b));
}

}  // namespace compact_map
