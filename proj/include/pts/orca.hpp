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

#ifndef PTS_ORCA_HPP
#define PTS_ORCA_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "pts/params.hpp"
#include "pts/types.hpp"

namespace pts::orca {

/// Truncated velocity cone of relative velocities that bring two discs into
/// contact within `tau`: { v | exists t in (0, tau], |t v - p_rel| < r_sum }.
struct VelocityObstacle {
  Vec2 p_rel;  ///< p_j - p_i
  double r_sum = 0.0;
  double tau = 0.0;
};

struct OrcaResult {
  Vec2 u;  ///< smallest change of the relative velocity that reaches the VO boundary
  Vec2 n;  ///< outward boundary normal at v_opt_rel + u
  /// Set when the discs already overlap; u then separates them within one step.
  bool colliding = false;
};

bool vo_contains(const VelocityObstacle& vo, const PlanarVelocity& v_rel);

/// Closest-point construction on the truncated cone (cutoff arc or one of the
/// legs). When the discs overlap, the constraint instead removes the overlap
/// over `collision_dt`.
OrcaResult compute_u(const VelocityObstacle& vo, const PlanarVelocity& v_opt_rel,
                     double collision_dt = 0.0167);

/// ORCA constraint for agent i induced by agent j; `responsibility` is the
/// share of u that i takes on (0.5 between reciprocating formations).
HalfPlane orca_halfplane(const Point2& p_i, const Point2& p_j, const PlanarVelocity& v_i_opt,
                         const PlanarVelocity& v_j_opt, double r_i, double r_j, double tau,
                         double responsibility = 0.5, double collision_dt = 0.0167);

/// Static disc: no reciprocation, full responsibility, horizon `tau_obstacle`.
HalfPlane obstacle_halfplane(const Point2& p_i, const PlanarVelocity& v_i_opt, double r_i,
                             const Obstacle& obstacle, double tau_obstacle,
                             double collision_dt = 0.0167);

struct LpResult {
  PlanarVelocity velocity;
  /// False when the constraints and the speed disc do not intersect; the
  /// velocity then minimizes the largest violation.
  bool feasible = true;
};

/// argmin |v - v_pref| subject to |v| <= v_max and every half-plane.
LpResult solve_velocity_lp(std::span<const HalfPlane> halfplanes, const PlanarVelocity& v_pref,
                           double v_max);

/// Largest violation over `halfplanes` (0 when all are satisfied).
double max_violation(std::span<const HalfPlane> halfplanes, const PlanarVelocity& v);

/// What a formation exposes to its neighbours at the start of a step.
struct AgentSnapshot {
  Point2 position;
  PlanarVelocity velocity;
  double radius = 0.0;
  bool arrived = false;
};

AgentSnapshot snapshot(const Formation& f);

/// Indices j != i with |p_j - p_i| < neighbour_dist that have not arrived.
std::vector<std::size_t> formation_neighbours(std::span<const AgentSnapshot> all, std::size_t i,
                                              double neighbour_dist);
std::vector<std::size_t> formation_neighbours(std::span<const Formation> all, std::size_t i,
                                              double neighbour_dist);

/// Maps a holonomic velocity onto a forward-only unicycle command.
VelocityCmd to_nonholonomic(const PlanarVelocity& v_star, const Pose& pose, double v_max,
                            double omega_max, double k_omega = 2.0);

/// Velocity toward `target`, at most v_max, slowing over the last tau_slow seconds.
PlanarVelocity preferred_velocity(const Point2& position, const Point2& target, double v_max,
                                  double tau_slow);

struct LeaderDecision {
  VelocityCmd cmd;
  PlanarVelocity v_star;  ///< optimal holonomic velocity before the unicycle map
  bool feasible = true;
  std::size_t next_dest_index = 0;
  PlanarVelocity v_pref;
  bool waypoint_advanced = false;
};

/// Modified nh-ORCA for one leader: half-planes against neighbouring
/// formations (tau) and nearby static discs (tau_obstacle), the velocity LP,
/// the unicycle map and the delta waypoint switch. Pure: the caller commits
/// `next_dest_index` and `v_pref`.
LeaderDecision leader_velocity(const Formation& formation, std::span<const AgentSnapshot> neighbours,
                               std::span<const Obstacle> obstacles, const Params& params);

}  // namespace pts::orca

#endif  // PTS_ORCA_HPP
