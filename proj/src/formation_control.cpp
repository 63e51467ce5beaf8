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

#include "pts/formation_control.hpp"

#include <algorithm>
#include <cmath>

#include "pts/errors.hpp"

namespace pts::formation {

Pose desired_follower_pose(const Pose& leader, const FollowerSpec& spec) {
  if (!(spec.rho_d > 0.0) || !std::isfinite(spec.psi_d)) {
    throw InvalidInput("desired_follower_pose: invalid follower spec");
  }
  const double bearing = leader.theta + spec.psi_d;
  return {leader.x + spec.rho_d * std::cos(bearing), leader.y + spec.rho_d * std::sin(bearing),
          angle_normalize(leader.theta)};
}

TrackingErrors tracking_errors(const Pose& leader, const Pose& follower, const FollowerSpec& spec) {
  const Pose slot = desired_follower_pose(leader, spec);
  const Vec2 delta = slot.position() - follower.position();
  const Vec2 heading{std::cos(follower.theta), std::sin(follower.theta)};

  TrackingErrors e;
  e.alpha = dot(delta, heading);
  e.beta = dot(delta, perp(heading));
  e.theta_ij = angle_normalize(leader.theta - follower.theta);
  e.theta_je = e.theta_ij;
  e.x_je = delta.x;
  e.y_je = delta.y;
  return e;
}

VelocityCmd follower_cmd(const VelocityCmd& leader_cmd, const TrackingErrors& errors,
                         const GainSet& gains, const FollowerSpec& spec, double d,
                         const Limits& limits) {
  if (d == 0.0) {
    throw SingularConfiguration("follower_cmd: d = 0 makes the angular law singular");
  }
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw InvalidInput("follower_cmd: d must be > 0");
  }
  const double vi = leader_cmd.v;
  const double wi = leader_cmd.omega;
  const double th = errors.theta_ij;
  const double rho = spec.rho_d;
  const double psi = spec.psi_d;

  const double v = gains.k1 * errors.alpha + vi * std::cos(th) - rho * wi * std::sin(psi - th);
  const double w = (vi * std::sin(th) + rho * wi * std::cos(psi + th) + gains.k2 * errors.beta +
                    gains.k3 * errors.theta_je) /
                   d;
  return {std::clamp(v, -limits.v_max, limits.v_max),
          std::clamp(w, -limits.omega_max, limits.omega_max)};
}

}  // namespace pts::formation
