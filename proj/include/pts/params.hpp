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

#ifndef PTS_PARAMS_HPP
#define PTS_PARAMS_HPP

#include <cstddef>
#include <cstdint>

#include "pts/types.hpp"

namespace pts {

struct RrtParams {
  std::size_t max_iters = 10000;
  double step_eta = 2.0;
  double goal_bias = 0.05;
  double rewire_gamma = 30.0;

  bool operator==(const RrtParams&) const = default;
};

/// Every tunable of the simulator. Defaults for the leader-follower gains,
/// delta, tau, dt, tau_obstacle, maxspeed and neighbour_dist are the published
/// per-robot parameter table; the rest are engineering choices.
struct Params {
  GainSet gains;
  double delta = 1.3;           ///< waypoint acquisition radius (m)
  double tau = 11.0;            ///< ORCA horizon between formations (s)
  double dt = 0.0167;           ///< integration step (s)
  double tau_obstacle = 5.0;    ///< ORCA horizon against static discs (s)
  double maxspeed = 0.03;       ///< leader speed bound (m/s)
  double neighbour_dist = 4.0;  ///< ORCA sensing range (m)

  double omega_max = 1.0;         ///< rad/s, followers
  /// Leader turn-rate bound (rad/s); keeps slot speeds rho * omega within follower reach.
  double leader_omega_max = 0.1;
  double follower_maxspeed = 0.06;
  double waypoint_spacing = 1.0;  ///< interpolation step along the planned path (m)
  double goal_tolerance = 0.002;  ///< arrival radius around the final waypoint (m)
  double tau_slow = 1.0;          ///< braking time constant of v_pref (s)
  double k_omega = 2.0;           ///< heading gain of the holonomic-to-unicycle map
  double orca_margin = 0.1;       ///< added to every combined radius inside ORCA (m)
  double plan_clearance = 0.05;   ///< extra planner clearance beyond the formation radius (m)
  /// Clockwise turn of v_pref while other formations are in range (rad); 0 disables.
  double right_hand_bias = 0.6;
  std::size_t max_steps = 120000;
  std::size_t trajectory_stride = 1;  ///< record every n-th step in the trajectory table
  std::size_t metrics_stride = 60;    ///< sampling of the metric time series
  RrtParams rrt;

  bool operator==(const Params&) const = default;
};

}  // namespace pts

#endif  // PTS_PARAMS_HPP
