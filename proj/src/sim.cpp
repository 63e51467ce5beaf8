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

#include "pts/sim.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "pts/errors.hpp"
#include "pts/formation_control.hpp"
#include "pts/kinematics.hpp"
#include "pts/orca.hpp"
#include "pts/planner.hpp"
#include "pts/rng.hpp"

namespace pts::sim {

// ---------------------------------------------------------------------------
// Executor

struct Executor::Pool {
  std::vector<std::thread> workers;
  std::mutex mutex;
  std::condition_variable start_cv;
  std::condition_variable done_cv;
  const std::function<void(std::size_t)>* job = nullptr;
  std::size_t count = 0;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors;
  std::size_t generation = 0;
  std::size_t busy = 0;
  bool stop = false;

  void drain() {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        (*job)(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }

  void worker_loop() {
    std::size_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex);
        start_cv.wait(lock, [&] { return stop || generation != seen; });
        if (stop) {
          return;
        }
        seen = generation;
      }
      drain();
      {
        std::lock_guard lock(mutex);
        if (--busy == 0) {
          done_cv.notify_one();
        }
      }
    }
  }
};

Executor::Executor(std::size_t threads) {
  if (threads == 0) {
    return;
  }
  pool_ = std::make_unique<Pool>();
  for (std::size_t i = 0; i < threads; ++i) {
    pool_->workers.emplace_back([p = pool_.get()] { p->worker_loop(); });
  }
}

Executor::~Executor() {
  if (!pool_) {
    return;
  }
  {
    std::lock_guard lock(pool_->mutex);
    pool_->stop = true;
  }
  pool_->start_cv.notify_all();
  for (auto& w : pool_->workers) {
    w.join();
  }
}

std::size_t Executor::threads() const noexcept { return pool_ ? pool_->workers.size() : 0; }

void Executor::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (!pool_ || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  Pool& p = *pool_;
  {
    std::lock_guard lock(p.mutex);
    p.job = &fn;
    p.count = n;
    p.next.store(0);
    p.errors.assign(n, nullptr);
    p.busy = p.workers.size();
    ++p.generation;
  }
  p.start_cv.notify_all();
  p.drain();
  {
    std::unique_lock lock(p.mutex);
    p.done_cv.wait(lock, [&] { return p.busy == 0; });
    p.job = nullptr;
  }
  for (auto& e : p.errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

std::size_t Executor::threads_from_env() {
  const char* raw = std::getenv("PTS_SIM_THREADS");
  if (raw == nullptr || *raw == '\0') {
    return 0;
  }
  char* end = nullptr;
  const unsigned long value = std::strtoul(raw, &end, 10);
  if (*end != '\0') {
    return 0;
  }
  return static_cast<std::size_t>(value);
}

// ---------------------------------------------------------------------------
// Stepping

bool WorldState::all_arrived() const {
  return std::all_of(formations.begin(), formations.end(),
                     [](const Formation& f) { return f.arrived; });
}

namespace {

void halt(Formation& f) {
  f.leader.cmd = {};
  for (auto& fo : f.followers) {
    fo.state.cmd = {};
  }
  f.velocity = {};
}

/// Next state of formation i; reads only `world` and the shared snapshots.
Formation advance(const WorldState& world, std::size_t i,
                  const std::vector<orca::AgentSnapshot>& snaps,
                  const std::vector<Obstacle>& parked, const Params& params) {
  Formation f = world.formations[i];
  if (f.arrived) {
    halt(f);
    return f;
  }

  const Point2 p = f.position();
  if (f.path.empty() ||
      (f.next_dest_index + 1 >= f.path.size() && distance(p, f.dest) <= params.goal_tolerance)) {
    f.arrived = true;
    f.next_dest_index = f.path.size();
    f.arrival_time = world.sim_time;
    halt(f);
    return f;
  }

  f.v_pref = orca::preferred_velocity(p, f.path[f.next_dest_index], f.v_max, params.tau_slow);

  std::vector<orca::AgentSnapshot> neighbours;
  for (std::size_t j : orca::formation_neighbours(snaps, i, f.neighbour_dist)) {
    neighbours.push_back(snaps[j]);
  }
  std::vector<Obstacle> obstacles = world.obstacles;
  for (std::size_t j = 0; j < parked.size(); ++j) {
    if (j != i && parked[j].radius > 0.0) {
      obstacles.push_back(parked[j]);
    }
  }

  const orca::LeaderDecision decision = orca::leader_velocity(f, neighbours, obstacles, params);
  f.next_dest_index = decision.next_dest_index;
  f.v_pref = decision.v_pref;

  const Pose leader_pose = f.leader.pose;
  f.leader.cmd = decision.cmd;
  const formation::Limits limits{params.follower_maxspeed, params.omega_max};
  for (auto& fo : f.followers) {
    const auto errors = formation::tracking_errors(leader_pose, fo.state.pose, fo.spec);
    fo.state.cmd =
        formation::follower_cmd(decision.cmd, errors, params.gains, fo.spec, fo.state.d, limits);
    fo.state.pose = kinematics::integrate(fo.state.pose, fo.state.cmd, fo.state.d, params.dt);
  }
  f.leader.pose = kinematics::integrate(leader_pose, decision.cmd, f.leader.d, params.dt);
  f.velocity = (f.position() - p) / params.dt;
  return f;
}

}  // namespace

WorldState step(const WorldState& world, const Params& params, Executor* executor) {
  if (world.all_arrived()) {
    throw InvalidInput("step: every formation has already arrived");
  }
  const std::size_t n = world.formations.size();
  std::vector<orca::AgentSnapshot> snaps;
  std::vector<Obstacle> parked(n);  // radius 0 marks an active formation
  snaps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    snaps.push_back(orca::snapshot(world.formations[i]));
    if (world.formations[i].arrived) {
      parked[i] = Obstacle{world.formations[i].position(), world.formations[i].radius};
    }
  }

  WorldState next;
  next.obstacles = world.obstacles;
  next.rng_seed = world.rng_seed;
  next.formations.resize(n);
  auto body = [&](std::size_t i) { next.formations[i] = advance(world, i, snaps, parked, params); };
  if (executor != nullptr) {
    executor->parallel_for(n, body);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
  }
  next.timestep_index = world.timestep_index + 1;
  next.sim_time = static_cast<double>(next.timestep_index) * params.dt;
  return next;
}

// ---------------------------------------------------------------------------
// Scenario setup

std::vector<Obstacle> scenario_obstacles(const ScenarioConfig& scenario, std::uint64_t seed) {
  std::vector<Obstacle> out = scenario.obstacles;
  if (!scenario.obstacle_generator || scenario.obstacle_generator->count == 0) {
    return out;
  }
  const ObstacleGenerator& gen = *scenario.obstacle_generator;
  Rng rng(mix_seed(seed, 0x0b57ac1eULL));
  constexpr std::size_t kAttempts = 10000;
  for (std::size_t k = 0; k < gen.count; ++k) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      Obstacle ob;
      ob.center = {rng.uniform(gen.region.min.x, gen.region.max.x),
                   rng.uniform(gen.region.min.y, gen.region.max.y)};
      ob.radius = rng.uniform(gen.min_radius, gen.max_radius);
      bool ok = true;
      for (const auto& fc : scenario.formations) {
        const double need = ob.radius + fc.radius + gen.keep_out;
        if (distance(ob.center, fc.start.position()) < need || distance(ob.center, fc.dest) < need) {
          ok = false;
          break;
        }
      }
      for (const auto& other : out) {
        if (distance(ob.center, other.center) < ob.radius + other.radius + gen.min_gap) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.push_back(ob);
        placed = true;
      }
    }
    if (!placed) {
      throw InvalidInput("obstacle_generator: could not place obstacle " + std::to_string(k + 1));
    }
  }
  return out;
}

WorldState initial_world(const ScenarioConfig& scenario, std::uint64_t seed, Executor* executor) {
  const Params& params = scenario.params;
  WorldState world;
  world.rng_seed = seed;
  world.obstacles = scenario_obstacles(scenario, seed);

  const std::size_t n = scenario.formations.size();
  std::vector<planner::Path> paths(n);
  auto plan_one = [&](std::size_t i) {
    const FormationConfig& fc = scenario.formations[i];
    try {
      const planner::Path raw = planner::plan(
          fc.start.position(), fc.dest, world.obstacles, scenario.arena,
          fc.radius + params.plan_clearance, params.rrt,
          mix_seed(seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(fc.id))));
      paths[i] = planner::interpolate(raw, params.waypoint_spacing);
    } catch (const PlanningFailure& e) {
      throw PlanningFailure("formation " + std::to_string(fc.id) + ": " + e.what(),
                            e.iterations());
    } catch (const InvalidInput& e) {
      throw InvalidInput("formation " + std::to_string(fc.id) + ": " + e.what());
    }
  };
  if (executor != nullptr) {
    executor->parallel_for(n, plan_one);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      plan_one(i);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const FormationConfig& fc = scenario.formations[i];
    Formation f;
    f.id = fc.id;
    f.leader = RobotState{fc.start, {}, fc.body_radius, fc.d};
    for (std::size_t k = 0; k < fc.followers.size(); ++k) {
      Follower fo;
      fo.spec = fc.followers[k];
      fo.state.body_radius = fc.body_radius;
      fo.state.d = fc.d;
      fo.state.pose = k < fc.follower_starts.size()
                          ? fc.follower_starts[k]
                          : formation::desired_follower_pose(fc.start, fo.spec);
      f.followers.push_back(fo);
    }
    f.radius = fc.radius;
    f.src = fc.start.position();
    f.dest = fc.dest;
    f.path = std::move(paths[i].points);
    f.next_dest_index = f.path.size() > 1 ? 1 : 0;
    f.v_max = params.maxspeed;
    f.neighbour_dist = params.neighbour_dist;
    if (!f.path.empty()) {
      f.v_pref = orca::preferred_velocity(f.src, f.path[f.next_dest_index], f.v_max,
                                          params.tau_slow);
    }
    f.validate();
    world.formations.push_back(std::move(f));
  }
  return world;
}

// ---------------------------------------------------------------------------
// Recording

namespace {

class Recorder {
 public:
  Recorder(SimReport& report, const Params& params) : report_(report), params_(params) {
    report_.min_pairwise_clearance = std::numeric_limits<double>::infinity();
    report_.min_obstacle_clearance = std::numeric_limits<double>::infinity();
    report_.series_stride = std::max<std::size_t>(1, params.metrics_stride);
  }

  void begin(const WorldState& world) {
    const std::size_t n = world.formations.size();
    if (n > 1) {
      for (const auto& f : world.formations) {
        report_.min_pairwise_distance.push_back({f.id, {}, {}});
      }
    }
    for (const auto& f : world.formations) {
      for (std::size_t k = 0; k < f.followers.size(); ++k) {
        FollowerSeries s;
        s.formation_id = f.id;
        s.robot_id = static_cast<int>(k + 1);
        s.rho_d = f.followers[k].spec.rho_d;
        s.min_after_transient = std::numeric_limits<double>::infinity();
        s.max_after_transient = -std::numeric_limits<double>::infinity();
        report_.follower_distance.push_back(std::move(s));
      }
    }
  }

  /// `before` is the state at step k, `after` carries the commands applied during step k.
  void record_step(const WorldState& before, const WorldState& after) {
    const std::size_t k = before.timestep_index;
    observe(before);
    if (k % std::max<std::size_t>(1, params_.trajectory_stride) == 0) {
      for (std::size_t i = 0; i < before.formations.size(); ++i) {
        const Formation& f0 = before.formations[i];
        const Formation& f1 = after.formations[i];
        report_.trajectories.push_back(
            {k, before.sim_time, f0.id, 0, Role::kLeader, f0.leader.pose, f1.leader.cmd});
        for (std::size_t r = 0; r < f0.followers.size(); ++r) {
          report_.trajectories.push_back({k, before.sim_time, f0.id, static_cast<int>(r + 1),
                                          Role::kFollower, f0.followers[r].state.pose,
                                          f1.followers[r].state.cmd});
        }
      }
    }
  }

  /// Safety and rigidity checks on every visited state; series every stride.
  void observe(const WorldState& w) {
    const auto& fs = w.formations;
    const std::size_t n = fs.size();
    bool collided = false;
    bool penetrated = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double gap = distance(fs[i].position(), fs[j].position()) - fs[i].radius - fs[j].radius;
        report_.min_pairwise_clearance = std::min(report_.min_pairwise_clearance, gap);
        collided = collided || gap < 0.0;
      }
      for (const auto& ob : w.obstacles) {
        const double gap = distance(fs[i].position(), ob.center) - fs[i].radius - ob.radius;
        report_.min_obstacle_clearance = std::min(report_.min_obstacle_clearance, gap);
        penetrated = penetrated || gap < 0.0;
      }
    }
    report_.collision_count += (collided || penetrated) ? 1 : 0;
    report_.obstacle_penetrations += penetrated ? 1 : 0;

    const bool sample = w.timestep_index % report_.series_stride == 0;
    if (sample) {
      report_.series_time.push_back(w.sim_time);
      if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
          double best = std::numeric_limits<double>::infinity();
          double threshold = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
              continue;
            }
            const double d = distance(fs[i].position(), fs[j].position());
            if (d < best) {
              best = d;
              threshold = fs[i].radius + fs[j].radius;
            }
          }
          report_.min_pairwise_distance[i].distance.push_back(best);
          report_.min_pairwise_distance[i].threshold.push_back(threshold);
        }
      }
    }

    std::size_t s = 0;
    for (const auto& f : fs) {
      for (const auto& fo : f.followers) {
        FollowerSeries& series = report_.follower_distance[s++];
        const double d = distance(fo.state.pose.position(), f.position());
        if (sample) {
          series.distance.push_back(d);
        }
        if (w.sim_time >= report_.rigidity_transient) {
          series.min_after_transient = std::min(series.min_after_transient, d);
          series.max_after_transient = std::max(series.max_after_transient, d);
        }
      }
    }
  }

 private:
  SimReport& report_;
  const Params& params_;
};

}  // namespace

SimReport run(const ScenarioConfig& scenario, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(scenario.seed);
  const std::size_t max_steps = options.max_steps.value_or(scenario.params.max_steps);
  const Params& params = scenario.params;

  Executor executor(options.threads);
  WorldState world = initial_world(scenario, seed, &executor);

  SimReport report;
  report.scenario = scenario.name;
  report.seed = seed;
  report.dt = params.dt;
  report.obstacles = world.obstacles;

  Recorder recorder(report, params);
  recorder.begin(world);
  while (!world.all_arrived() && world.timestep_index < max_steps) {
    WorldState next = step(world, params, &executor);
    recorder.record_step(world, next);
    world = std::move(next);
  }
  recorder.observe(world);

  report.steps = world.timestep_index;
  report.complete = world.all_arrived();
  for (std::size_t i = 0; i < world.formations.size(); ++i) {
    const Formation& f = world.formations[i];
    FormationSummary s;
    s.id = f.id;
    s.radius = f.radius;
    s.robots = f.followers.size() + 1;
    s.arrived = f.arrived;
    s.time_to_goal = f.arrival_time;
    s.waypoints = f.path;
    s.planned_length = planner::Path{f.path}.length();
    report.formations.push_back(std::move(s));
  }
  return report;
}

}  // namespace pts::sim
