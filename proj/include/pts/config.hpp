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

#ifndef PTS_CONFIG_HPP
#define PTS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pts/params.hpp"
#include "pts/planner.hpp"
#include "pts/types.hpp"

namespace pts {

struct FormationConfig {
  int id = 0;
  /// Leader start pose; its position is the formation source.
  Pose start;
  Point2 dest;
  std::vector<FollowerSpec> followers;
  double body_radius = 0.1;
  double d = 0.1;
  double radius = 0.5;
  /// Optional explicit follower start poses; followers otherwise start in their slots.
  std::vector<Pose> follower_starts;

  bool operator==(const FormationConfig&) const = default;
};

/// Disc obstacles drawn from the scenario seed when the simulation starts.
struct ObstacleGenerator {
  std::size_t count = 0;
  double min_radius = 0.3;
  double max_radius = 0.8;
  planner::Bounds region;
  /// Minimum gap between a generated disc and any formation source or destination disc.
  double keep_out = 0.5;
  /// Minimum gap between two obstacles; wide enough gaps let two formations pass.
  double min_gap = 0.5;

  bool operator==(const ObstacleGenerator&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  planner::Bounds arena{{-10.0, -10.0}, {10.0, 10.0}};
  std::vector<Obstacle> obstacles;
  std::optional<ObstacleGenerator> obstacle_generator;
  std::vector<FormationConfig> formations;
  Params params;
  std::uint64_t seed = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Evenly spaced follower slots at distance `rho`, symmetric about the rear axis.
std::vector<FollowerSpec> ring_followers(std::size_t count, double rho = 0.35);

}  // namespace pts

#endif  // PTS_CONFIG_HPP
