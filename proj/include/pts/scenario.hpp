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

#ifndef PTS_SCENARIO_HPP
#define PTS_SCENARIO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pts/config.hpp"
#include "pts/sim.hpp"

namespace pts::scenario {

/// Parses a JSON scenario document, applies defaults for omitted parameters
/// and validates every invariant. Throws ValidationError.
ScenarioConfig load_scenario(std::string_view text);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// Canonical document with every key spelled out; load_scenario inverts it exactly.
std::string write_scenario(const ScenarioConfig& config);

/// Throws ValidationError naming the first offending field.
void validate(const ScenarioConfig& config);

inline constexpr std::string_view kTrajectoryHeader =
    "step,time,formation_id,robot_id,role,x,y,theta,v,omega";

/// One row per robot per recorded step, sorted by (step, formation_id, robot_id).
void write_trajectories(const sim::SimReport& report, std::ostream& out);
void write_trajectories(const sim::SimReport& report, const std::filesystem::path& path);
std::vector<sim::TrajectoryRow> read_trajectories(std::istream& in);

std::string metrics_json(const sim::SimReport& report);
void write_metrics(const sim::SimReport& report, std::ostream& out);
void write_metrics(const sim::SimReport& report, const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace pts::scenario

#endif  // PTS_SCENARIO_HPP
