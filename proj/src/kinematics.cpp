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

#include "pts/kinematics.hpp"

#include <cmath>

#include "pts/errors.hpp"

namespace pts::kinematics {

PoseRate pose_derivative(const Pose& pose, const VelocityCmd& cmd, double d) {
  if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta) ||
      !std::isfinite(cmd.v) || !std::isfinite(cmd.omega) || !std::isfinite(d)) {
    throw InvalidInput("pose_derivative: non-finite input");
  }
  if (d < 0.0) {
    throw InvalidInput("pose_derivative: d must be >= 0");
  }
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {cmd.v * c - d * cmd.omega * s, cmd.v * s + d * cmd.omega * c, cmd.omega};
}

Pose integrate(const Pose& pose, const VelocityCmd& cmd, double d, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidInput("integrate: dt must be > 0");
  }
  const PoseRate rate = pose_derivative(pose, cmd, d);
  return {pose.x + dt * rate.dx, pose.y + dt * rate.dy, angle_normalize(pose.theta + dt * rate.dtheta)};
}

}  // namespace pts::kinematics
