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

#include "pts/orca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pts/errors.hpp"

namespace pts::orca {

bool vo_contains(const VelocityObstacle& vo, const PlanarVelocity& v_rel) {
  const double speed_sq = abs_sq(v_rel);
  double t = 0.0;
  if (speed_sq > 0.0) {
    t = std::clamp(dot(v_rel, vo.p_rel) / speed_sq, 0.0, vo.tau);
  }
  // At t -> 0+ the distance tends to |p_rel|; the disc is open so the limit suffices.
  return abs_sq(t * v_rel - vo.p_rel) < vo.r_sum * vo.r_sum;
}

OrcaResult compute_u(const VelocityObstacle& vo, const PlanarVelocity& v_opt_rel,
                     double collision_dt) {
  if (!(vo.tau > 0.0) || !(vo.r_sum > 0.0)) {
    throw InvalidInput("compute_u: tau and r_sum must be > 0");
  }
  if (!is_finite(vo.p_rel) || !is_finite(v_opt_rel)) {
    throw InvalidInput("compute_u: non-finite input");
  }
  const Vec2& p = vo.p_rel;
  const double r = vo.r_sum;
  const double dist_sq = abs_sq(p);
  const double r_sq = r * r;

  OrcaResult out;
  if (dist_sq > r_sq) {
    const double inv_tau = 1.0 / vo.tau;
    const Vec2 w = v_opt_rel - inv_tau * p;
    const double w_len_sq = abs_sq(w);
    const double dot1 = dot(w, p);

    if (dot1 < 0.0 && dot1 * dot1 > r_sq * w_len_sq) {
      // Closest boundary point lies on the cutoff arc.
      const double w_len = std::sqrt(w_len_sq);
      const Vec2 unit_w = w / w_len;
      out.u = (r * inv_tau - w_len) * unit_w;
      out.n = unit_w;
    } else {
      // Closest boundary point lies on a leg. dir runs along the leg with the
      // outside of the cone on its left.
      const double leg = std::sqrt(dist_sq - r_sq);
      Vec2 dir;
      if (det(p, w) > 0.0) {
        dir = Vec2{p.x * leg - p.y * r, p.x * r + p.y * leg} / dist_sq;
      } else {
        dir = -Vec2{p.x * leg + p.y * r, -p.x * r + p.y * leg} / dist_sq;
      }
      out.u = dot(v_opt_rel, dir) * dir - v_opt_rel;
      out.n = perp(dir);
    }
    return out;
  }

  if (!(collision_dt > 0.0)) {
    throw InvalidInput("compute_u: collision_dt must be > 0");
  }
  // Overlapping discs: require the relative velocity to clear the overlap in one step.
  const double inv_dt = 1.0 / collision_dt;
  const Vec2 w = v_opt_rel - inv_dt * p;
  const double w_len = norm(w);
  Vec2 unit_w{1.0, 0.0};
  if (w_len > 0.0) {
    unit_w = w / w_len;
  }
  out.u = (r * inv_dt - w_len) * unit_w;
  out.n = unit_w;
  out.colliding = true;
  return out;
}

HalfPlane orca_halfplane(const Point2& p_i, const Point2& p_j, const PlanarVelocity& v_i_opt,
                         const PlanarVelocity& v_j_opt, double r_i, double r_j, double tau,
                         double responsibility, double collision_dt) {
  if (!(tau > 0.0)) {
    throw InvalidInput("orca_halfplane: tau must be > 0");
  }
  const OrcaResult res =
      compute_u(VelocityObstacle{p_j - p_i, r_i + r_j, tau}, v_i_opt - v_j_opt, collision_dt);
  return HalfPlane{v_i_opt + responsibility * res.u, res.n};
}

HalfPlane obstacle_halfplane(const Point2& p_i, const PlanarVelocity& v_i_opt, double r_i,
                             const Obstacle& obstacle, double tau_obstacle, double collision_dt) {
  if (!(tau_obstacle > 0.0)) {
    throw InvalidInput("obstacle_halfplane: tau_obstacle must be > 0");
  }
  return orca_halfplane(p_i, obstacle.center, v_i_opt, PlanarVelocity{}, r_i, obstacle.radius,
                        tau_obstacle, 1.0, collision_dt);
}

AgentSnapshot snapshot(const Formation& f) {
  return {f.position(), f.velocity, f.radius, f.arrived};
}

std::vector<std::size_t> formation_neighbours(std::span<const AgentSnapshot> all, std::size_t i,
                                              double neighbour_dist) {
  if (i >= all.size()) {
    throw InvalidInput("formation_neighbours: index out of range");
  }
  std::vector<std::size_t> out;
  const double range_sq = neighbour_dist * neighbour_dist;
  for (std::size_t j = 0; j < all.size(); ++j) {
    if (j == i || all[j].arrived) {
      continue;
    }
    if (abs_sq(all[j].position - all[i].position) < range_sq) {
      out.push_back(j);
    }
  }
  return out;
}

std::vector<std::size_t> formation_neighbours(std::span<const Formation> all, std::size_t i,
                                              double neighbour_dist) {
  std::vector<AgentSnapshot> snaps;
  snaps.reserve(all.size());
  for (const auto& f : all) {
    snaps.push_back(snapshot(f));
  }
  return formation_neighbours(snaps, i, neighbour_dist);
}

VelocityCmd to_nonholonomic(const PlanarVelocity& v_star, const Pose& pose, double v_max,
                            double omega_max, double k_omega) {
  if (!(v_max > 0.0) || !(omega_max > 0.0)) {
    throw InvalidInput("to_nonholonomic: limits must be > 0");
  }
  const double speed = norm(v_star);
  if (speed == 0.0) {
    return {0.0, 0.0};
  }
  const double phi = angle_normalize(std::atan2(v_star.y, v_star.x) - pose.theta);
  const double omega = std::clamp(k_omega * phi, -omega_max, omega_max);
  const double v = std::clamp(speed * std::max(0.0, std::cos(phi)), 0.0, v_max);
  return {v, omega};
}

PlanarVelocity preferred_velocity(const Point2& position, const Point2& target, double v_max,
                                  double tau_slow) {
  const Vec2 diff = target - position;
  const double dist = norm(diff);
  if (dist == 0.0) {
    return {};
  }
  const double speed = std::min(v_max, dist / tau_slow);
  return diff * (speed / dist);
}

namespace {

/// Safety margin that never exceeds most of the actual gap, so a margin
/// violation alone does not read as an overlap.
double soft_margin(double gap, double margin) {
  return std::clamp(0.9 * gap, 0.0, margin);
}

/// Planar velocity of the controlled point under `cmd`.
Vec2 realized(const VelocityCmd& cmd, const Vec2& heading, double d) {
  return cmd.v * heading + (d * cmd.omega) * perp(heading);
}

/// Keeps the unicycle command when the motion it produces satisfies the
/// half-planes as well as v_star does; otherwise picks the command whose
/// motion is closest to it among the motions the unicycle can produce.
VelocityCmd realizable(const VelocityCmd& nominal, const Pose& pose, double d, double v_max,
                       double omega_max, std::span<const HalfPlane> lines,
                       const PlanarVelocity& v_star) {
  const Vec2 heading{std::cos(pose.theta), std::sin(pose.theta)};
  const Vec2 target = realized(nominal, heading, d);
  bool ok = true;
  for (const auto& h : lines) {
    ok = ok && h.violation(target) <= std::max(h.violation(v_star), 0.0) + 1e-12;
  }
  if (ok || !(d > 0.0)) {
    return nominal;
  }
  // The reachable motions form a box: [0, v_max] along the heading, +-d omega_max across.
  const Vec2 side = perp(heading);
  const double lateral = d * omega_max;
  std::vector<HalfPlane> all(lines.begin(), lines.end());
  all.push_back({Vec2{}, heading});
  all.push_back({v_max * heading, -heading});
  all.push_back({lateral * side, -side});
  all.push_back({-lateral * side, side});
  const LpResult lp = solve_velocity_lp(all, target, std::hypot(v_max, lateral));
  return {std::clamp(dot(lp.velocity, heading), 0.0, v_max),
          std::clamp(dot(lp.velocity, side) / d, -omega_max, omega_max)};
}

}  // namespace

LeaderDecision leader_velocity(const Formation& formation, std::span<const AgentSnapshot> neighbours,
                               std::span<const Obstacle> obstacles, const Params& params) {
  if (formation.arrived) {
    throw InvalidInput("leader_velocity: formation " + std::to_string(formation.id) +
                       " has already arrived");
  }
  const Point2 p = formation.position();
  const PlanarVelocity v_opt = formation.velocity;
  const double r = formation.radius;

  std::vector<HalfPlane> lines;
  lines.reserve(obstacles.size() + neighbours.size());
  for (const auto& ob : obstacles) {
    const double gap = distance(p, ob.center) - ob.radius - r;
    if (gap < formation.neighbour_dist) {
      const double margin = soft_margin(gap, params.orca_margin);
      lines.push_back(
          obstacle_halfplane(p, v_opt, r + margin, ob, params.tau_obstacle, params.dt));
    }
  }
  for (const auto& nb : neighbours) {
    const double gap = distance(p, nb.position) - nb.radius - r;
    // Each side of the pair claims half of the margin.
    const double margin = soft_margin(gap, 2.0 * params.orca_margin) / 2.0;
    lines.push_back(orca_halfplane(p, nb.position, v_opt, nb.velocity, r + margin,
                                   nb.radius + margin, params.tau, 0.5, params.dt));
  }

  PlanarVelocity v_pref = formation.v_pref;
  if (!neighbours.empty() && params.right_hand_bias != 0.0) {
    // Everyone veering the same way turns symmetric stand-offs into a roundabout.
    const double c = std::cos(params.right_hand_bias);
    const double s = std::sin(params.right_hand_bias);
    v_pref = {c * v_pref.x + s * v_pref.y, -s * v_pref.x + c * v_pref.y};
  }
  const LpResult lp = solve_velocity_lp(lines, v_pref, formation.v_max);

  LeaderDecision out;
  out.v_star = lp.velocity;
  out.feasible = lp.feasible;
  out.cmd = to_nonholonomic(lp.velocity, formation.leader.pose, formation.v_max,
                            params.leader_omega_max, params.k_omega);
  out.cmd = realizable(out.cmd, formation.leader.pose, formation.leader.d, formation.v_max,
                       params.leader_omega_max, lines, lp.velocity);
  out.next_dest_index = formation.next_dest_index;
  out.v_pref = formation.v_pref;

  // Waypoint switch; the final waypoint is held until arrival.
  const std::size_t idx = formation.next_dest_index;
  if (idx + 1 < formation.path.size() && distance(p, formation.path[idx]) <= params.delta) {
    out.next_dest_index = idx + 1;
    out.v_pref = preferred_velocity(p, formation.path[idx + 1], formation.v_max, params.tau_slow);
    out.waypoint_advanced = true;
  }
  return out;
}

}  // namespace pts::orca
