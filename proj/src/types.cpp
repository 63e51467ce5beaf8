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

#include "pts/types.hpp"

#include <algorithm>
#include <string>

#include "pts/errors.hpp"

namespace pts {

double angle_normalize(double theta) {
  if (!std::isfinite(theta)) {
    throw InvalidInput("angle_normalize: non-finite angle");
  }
  // remainder() is exact and lands in [-pi, pi].
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) {
    r += 2.0 * kPi;
  }
  return r;
}

void validate(const GainSet& gains) {
  const double values[] = {gains.k1, gains.k2, gains.k3, gains.k4, gains.k5, gains.k6};
  for (std::size_t i = 0; i < std::size(values); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw InvalidInput("gain k" + std::to_string(i + 1) + " must be > 0");
    }
  }
}

HalfPlane HalfPlane::make(const PlanarVelocity& point, const Vec2& normal) {
  const double len = norm(normal);
  if (!(len > 0.0) || !std::isfinite(len) || !is_finite(point)) {
    throw InvalidInput("HalfPlane: normal must be finite and non-zero");
  }
  return HalfPlane{point, normal / len};
}

double Formation::min_radius() const {
  double bound = leader.body_radius;
  for (const auto& f : followers) {
    bound = std::max(bound, f.spec.rho_d + f.state.body_radius);
  }
  return bound;
}

namespace {

void check_robot(const RobotState& r, const std::string& who) {
  if (!std::isfinite(r.pose.x) || !std::isfinite(r.pose.y) || !std::isfinite(r.pose.theta)) {
    throw InvalidInput(who + ": pose must be finite");
  }
  if (!(r.body_radius > 0.0)) {
    throw InvalidInput(who + ": body_radius must be > 0");
  }
  if (!(r.d > 0.0)) {
    throw InvalidInput(who + ": d must be > 0");
  }
}

}  // namespace

void Formation::validate() const {
  const std::string name = "formation " + std::to_string(id);
  check_robot(leader, name + " leader");
  for (std::size_t k = 0; k < followers.size(); ++k) {
    check_robot(followers[k].state, name + " follower " + std::to_string(k + 1));
    if (!(followers[k].spec.rho_d > 0.0) || !std::isfinite(followers[k].spec.psi_d)) {
      throw InvalidInput(name + " follower " + std::to_string(k + 1) +
                         ": rho_d must be > 0 and psi_d finite");
    }
  }
  const double bound = min_radius();
  if (!(radius >= bound)) {
    throw InvalidInput(name + ": radius " + std::to_string(radius) +
                       " is below the enclosing bound " + std::to_string(bound));
  }
  if (next_dest_index > path.size()) {
    throw InvalidInput(name + ": next_dest_index beyond path");
  }
  if (arrived && next_dest_index != path.size()) {
    throw InvalidInput(name + ": arrived formation must have exhausted its path");
  }
}

}  // namespace pts
