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

#ifndef PTS_KINEMATICS_HPP
#define PTS_KINEMATICS_HPP

#include "pts/types.hpp"

namespace pts::kinematics {

struct PoseRate {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

/// Unicycle kinematics of the point offset by d along the heading:
///   [dx]   [cos(theta)  -d sin(theta)] [v    ]
///   [dy] = [sin(theta)   d cos(theta)] [omega]
///   [dth]  [    0             1      ]
PoseRate pose_derivative(const Pose& pose, const VelocityCmd& cmd, double d);

/// One explicit Euler step of length dt; the heading is re-normalized.
Pose integrate(const Pose& pose, const VelocityCmd& cmd, double d, double dt);

}  // namespace pts::kinematics

#endif  // PTS_KINEMATICS_HPP
