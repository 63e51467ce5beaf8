/*
 * Copyright 2026 The PTS Traffic Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PTS_TYPES_HPP
#define PTS_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace pts {

inline constexpr double kPi = 3.14159265358979323846;

/// Plain 2-vector used for positions (m) and holonomic velocities (m/s).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double det(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
constexpr double abs_sq(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline bool is_finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Unit vector along v; v must be non-zero.
inline Vec2 normalized(const Vec2& v) { return v / norm(v); }

/// Counter-clockwise perpendicular.
constexpr Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

using Point2 = Vec2;
using PlanarVelocity = Vec2;

/// Maps any finite angle to (-pi, pi]. Throws InvalidInput otherwise.
double angle_normalize(double theta);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Point2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

/// Non-holonomic command: linear (m/s) and angular (rad/s) velocity.
struct VelocityCmd {
  double v = 0.0;
  double omega = 0.0;

  bool operator==(const VelocityCmd&) const = default;
};

struct RobotState {
  Pose pose;
  VelocityCmd cmd;
  double body_radius = 0.1;
  /// Offset from the wheel-axle midpoint to the controlled center of mass.
  double d = 0.1;

  bool operator==(const RobotState&) const = default;
};

/// Desired placement of a follower in its leader's frame.
struct FollowerSpec {
  double rho_d = 0.35;
  double psi_d = kPi;

  bool operator==(const FollowerSpec&) const = default;
};

/// Leader-follower gains. k4..k6 are carried for completeness; no law reads them.
struct GainSet {
  double k1 = 1.5;
  double k2 = 1.0;
  double k3 = 0.025;
  double k4 = 15.0;
  double k5 = 1.0;
  double k6 = 1.0;

  bool operator==(const GainSet&) const = default;
};

/// Throws InvalidInput unless every gain is finite and strictly positive.
void validate(const GainSet& gains);

struct Obstacle {
  Point2 center;
  double radius = 0.0;

  bool operator==(const Obstacle&) const = default;
};

/// Linear constraint in velocity space. Feasible side: dot(v - point, normal) >= 0.
struct HalfPlane {
  PlanarVelocity point;
  Vec2 normal{1.0, 0.0};

  /// Builds a half-plane, normalizing `normal`. Throws InvalidInput on a zero normal.
  static HalfPlane make(const PlanarVelocity& point, const Vec2& normal);

  /// Signed distance of v into the infeasible side; <= 0 when satisfied.
  double violation(const PlanarVelocity& v) const { return dot(point - v, normal); }
  bool contains(const PlanarVelocity& v, double tol = 0.0) const {
    return violation(v) <= tol;
  }
};

struct Follower {
  RobotState state;
  FollowerSpec spec;

  bool operator==(const Follower&) const = default;
};

/// One payload transport system: a leader, its followers and the ORCA-level
/// state of the bounding disc. The formation position is the leader position.
struct Formation {
  int id = 0;
  RobotState leader;
  std::vector<Follower> followers;
  double radius = 0.0;
  Point2 src;
  Point2 dest;
  std::vector<Point2> path;
  std::size_t next_dest_index = 0;
  PlanarVelocity v_pref;
  /// Planar velocity of the leader over the last step.
  PlanarVelocity velocity;
  double v_max = 0.03;
  double neighbour_dist = 4.0;
  bool arrived = false;
  std::optional<double> arrival_time;

  Point2 position() const { return leader.pose.position(); }

  /// Smallest admissible bounding radius for the current robots and specs.
  double min_radius() const;

  /// Checks the radius bound, the robot parameters and path progress.
  /// Throws InvalidInput naming the violated bound.
  void validate() const;

  bool operator==(const Formation&) const = default;
};

}  // namespace pts

#endif  // PTS_TYPES_HPP
