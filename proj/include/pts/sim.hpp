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

#ifndef PTS_SIM_HPP
#define PTS_SIM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pts/config.hpp"
#include "pts/params.hpp"
#include "pts/types.hpp"

namespace pts::sim {

/// Fixed-size worker pool for the per-formation work inside one step. With
/// zero threads every call runs inline on the caller.
class Executor {
 public:
  explicit Executor(std::size_t threads = 0);
  ~Executor();
  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  std::size_t threads() const noexcept;

  /// Runs fn(0..n-1). Rethrows the exception of the lowest failing index.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

  /// Thread count from PTS_SIM_THREADS (unset or invalid means 0).
  static std::size_t threads_from_env();

 private:
  struct Pool;
  std::unique_ptr<Pool> pool_;
};

struct WorldState {
  std::vector<Formation> formations;
  std::vector<Obstacle> obstacles;
  std::size_t timestep_index = 0;
  double sim_time = 0.0;
  std::uint64_t rng_seed = 0;

  bool all_arrived() const;
  bool operator==(const WorldState&) const = default;
};

/// Advances every active formation by one dt against a snapshot of the
/// previous state. Throws InvalidInput when every formation has arrived.
WorldState step(const WorldState& world, const Params& params, Executor* executor = nullptr);

enum class Role { kLeader, kFollower };

struct TrajectoryRow {
  std::size_t step = 0;
  double time = 0.0;
  int formation_id = 0;
  int robot_id = 0;  ///< 0 is the leader, followers count from 1
  Role role = Role::kLeader;
  Pose pose;
  VelocityCmd cmd;

  bool operator==(const TrajectoryRow&) const = default;
};

struct FormationSummary {
  int id = 0;
  double radius = 0.0;
  std::size_t robots = 0;
  bool arrived = false;
  std::optional<double> time_to_goal;
  double planned_length = 0.0;
  std::vector<Point2> waypoints;
};

/// Closest other formation of one formation over time.
struct NeighbourSeries {
  int formation_id = 0;
  std::vector<double> distance;   ///< center distance to the closest formation
  std::vector<double> threshold;  ///< r_i + r_j for that formation
};

struct FollowerSeries {
  int formation_id = 0;
  int robot_id = 0;
  double rho_d = 0.0;
  std::vector<double> distance;  ///< follower to leader
  /// Extremes over every step after `rigidity_transient`.
  double min_after_transient = 0.0;
  double max_after_transient = 0.0;
};

struct SimReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  bool complete = false;
  std::size_t collision_count = 0;
  std::size_t obstacle_penetrations = 0;
  /// min over states and pairs of |p_i - p_j| - (r_i + r_j); +inf with fewer than two formations.
  double min_pairwise_clearance = 0.0;
  /// min over states of formation-disc to obstacle-disc gap; +inf without obstacles.
  double min_obstacle_clearance = 0.0;
  double rigidity_transient = 5.0;
  std::vector<Obstacle> obstacles;
  std::vector<FormationSummary> formations;
  std::vector<TrajectoryRow> trajectories;
  std::size_t series_stride = 1;
  std::vector<double> series_time;
  std::vector<NeighbourSeries> min_pairwise_distance;
  std::vector<FollowerSeries> follower_distance;
};

struct RunOptions {
  std::size_t threads = 0;
  std::optional<std::size_t> max_steps;
  std::optional<std::uint64_t> seed;
};

/// Materialized obstacles: the fixed list plus the seeded generator output.
std::vector<Obstacle> scenario_obstacles(const ScenarioConfig& scenario, std::uint64_t seed);

/// Plans every formation and builds the initial world. Throws PlanningFailure
/// naming the first formation that cannot be planned.
WorldState initial_world(const ScenarioConfig& scenario, std::uint64_t seed,
                         Executor* executor = nullptr);

/// Plans, then steps until every formation arrives or max_steps is reached.
SimReport run(const ScenarioConfig& scenario, const RunOptions& options = {});

}  // namespace pts::sim

#endif  // PTS_SIM_HPP
