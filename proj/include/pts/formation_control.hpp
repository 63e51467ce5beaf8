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

#ifndef PTS_FORMATION_CONTROL_HPP
#define PTS_FORMATION_CONTROL_HPP

#include "pts/types.hpp"

namespace pts::formation {

/// Follower tracking errors with respect to its desired slot.
struct TrackingErrors {
  double alpha = 0.0;     ///< longitudinal error, follower body frame (m)
  double beta = 0.0;      ///< lateral error, follower body frame (m)
  double theta_ij = 0.0;  ///< leader heading minus follower heading
  double theta_je = 0.0;
  double x_je = 0.0;  ///< world-frame slot error (m)
  double y_je = 0.0;
};

struct Limits {
  double v_max = 0.06;
  double omega_max = 1.0;
};

/// Slot of a follower: rho_d ahead of the leader along bearing leader.theta + psi_d,
/// sharing the leader heading.
Pose desired_follower_pose(const Pose& leader, const FollowerSpec& spec);

TrackingErrors tracking_errors(const Pose& leader, const Pose& follower, const FollowerSpec& spec);

/// Decentralized leader-follower law:
///   v_j = k1 a + v_i cos(th) - rho w_i sin(psi - th)
///   w_j = (v_i sin(th) + rho w_i cos(psi + th) + k2 b + k3 th_e) / d
/// saturated to `limits`. Throws SingularConfiguration when d == 0.
VelocityCmd follower_cmd(const VelocityCmd& leader_cmd, const TrackingErrors& errors,
                         const GainSet& gains, const FollowerSpec& spec, double d,
                         const Limits& limits);

}  // namespace pts::formation

#endif  // PTS_FORMATION_CONTROL_HPP
