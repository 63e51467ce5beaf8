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

// Command-line front end: simulate, plan and validate scenario files.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pts/errors.hpp"
#include "pts/planner.hpp"
#include "pts/rng.hpp"
#include "pts/scenario.hpp"
#include "pts/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitPlanning = 3;
constexpr int kExitIncomplete = 4;

int simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
             const std::filesystem::path& out_dir, std::optional<std::size_t> max_steps) {
  const pts::ScenarioConfig config = pts::scenario::load_scenario_file(scenario_path);
  pts::sim::RunOptions options;
  options.threads = pts::sim::Executor::threads_from_env();
  options.seed = seed;
  options.max_steps = max_steps;
  const pts::sim::SimReport report = pts::sim::run(config, options);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw pts::IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }
  pts::scenario::write_trajectories(report, out_dir / "trajectories.csv");
  pts::scenario::write_metrics(report, out_dir / "metrics.json");

  std::cout << "steps " << report.steps << ", simulated "
            << pts::scenario::format_double(static_cast<double>(report.steps) * report.dt)
            << " s, collisions " << report.collision_count << '\n';
  for (const auto& f : report.formations) {
    std::cout << "formation " << f.id << ": "
              << (f.time_to_goal ? pts::scenario::format_double(*f.time_to_goal) + " s"
                                 : std::string("not arrived"))
              << '\n';
  }
  if (!report.complete) {
    std::cerr << "max steps reached before every formation arrived\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

int plan(const std::string& scenario_path, int formation_id, std::optional<std::uint64_t> seed) {
  const pts::ScenarioConfig config = pts::scenario::load_scenario_file(scenario_path);
  const std::uint64_t s = seed.value_or(config.seed);
  const auto world = pts::sim::initial_world(config, s);
  for (const auto& f : world.formations) {
    if (f.id != formation_id) {
      continue;
    }
    for (const auto& p : f.path) {
      std::cout << pts::scenario::format_double(p.x) << ',' << pts::scenario::format_double(p.y)
                << '\n';
    }
    return kExitOk;
  }
  throw pts::ValidationError("formation", "no formation with id " + std::to_string(formation_id));
}

int validate(const std::string& scenario_path) {
  const pts::ScenarioConfig config = pts::scenario::load_scenario_file(scenario_path);
  std::cout << "ok: " << config.formations.size() << " formations, " << config.obstacles.size()
            << " fixed obstacles\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-formation payload transport traffic simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::size_t> max_steps;
  int formation_id = 0;

  auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario and export trajectories and metrics");
  sim_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
  sim_cmd->add_option("--seed", seed, "Override the scenario seed");
  sim_cmd->add_option("--out", out_dir, "Output directory")->required();
  sim_cmd->add_option("--max-steps", max_steps, "Override params.max_steps");

  auto* plan_cmd = app.add_subcommand("plan", "Print the interpolated waypoints of one formation");
  plan_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
  plan_cmd->add_option("--formation", formation_id, "Formation id")->required();
  plan_cmd->add_option("--seed", seed, "Override the scenario seed");

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario document");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim_cmd) {
      return simulate(scenario_path, seed, out_dir, max_steps);
    }
    if (*plan_cmd) {
      return plan(scenario_path, formation_id, seed);
    }
    return validate(scenario_path);
  } catch (const pts::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const pts::PlanningFailure& e) {
    std::cerr << "planning failure: " << e.what() << '\n';
    return kExitPlanning;
  } catch (const pts::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
