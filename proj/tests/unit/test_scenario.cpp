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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>

#include "doctest.h"
#include "json.hpp"
#include "pts/config.hpp"
#include "pts/errors.hpp"
#include "pts/scenario.hpp"

using namespace pts;
using namespace pts::scenario;
using nlohmann::json;

namespace {

constexpr const char* kMinimal = R"({
  "formations": [
    {"id": 1, "start": {"x": 0, "y": 0}, "dest": [10, 0],
     "followers": [{"rho": 0.35, "psi": 3.141592653589793}]}
  ]
})";

sim::SimReport synthetic_report(std::size_t steps, std::size_t robots) {
  sim::SimReport r;
  r.scenario = "synthetic";
  r.dt = 0.0167;
  r.steps = steps;
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t i = 0; i < robots; ++i) {
      sim::TrajectoryRow row;
      row.step = k;
      row.time = static_cast<double>(k) * 0.0167;
      row.formation_id = 7;
      row.robot_id = static_cast<int>(i);
      row.role = i == 0 ? sim::Role::kLeader : sim::Role::kFollower;
      row.pose = {std::sin(0.1 * k + i) / 3.0, std::cos(0.37 * k) * 1e-7 + i, 0.1 * k - 1.0 / 3.0};
      row.cmd = {0.03 * std::exp(-0.01 * k), -1.0 / (k + 7.0)};
      r.trajectories.push_back(row);
    }
  }
  return r;
}

}  // namespace

TEST_CASE("defaults equal the published parameter table") {
  const Params p;
  CHECK(p.gains.k1 == 1.5);
  CHECK(p.gains.k2 == 1.0);
  CHECK(p.gains.k3 == 0.025);
  CHECK(p.gains.k4 == 15.0);
  CHECK(p.gains.k5 == 1.0);
  CHECK(p.gains.k6 == 1.0);
  CHECK(p.delta == 1.3);
  CHECK(p.tau == 11.0);
  CHECK(p.dt == 0.0167);
  CHECK(p.tau_obstacle == 5.0);
  CHECK(p.maxspeed == 0.03);
  CHECK(p.neighbour_dist == 4.0);
}

TEST_CASE("a minimal document picks up every default") {
  const ScenarioConfig c = load_scenario(kMinimal);
  CHECK(c.params == Params{});
  REQUIRE(c.formations.size() == 1);
  const FormationConfig& f = c.formations[0];
  CHECK(f.id == 1);
  CHECK(f.dest == Point2{10, 0});
  CHECK(f.start.theta == doctest::Approx(0.0));
  CHECK(f.radius == 0.5);
  CHECK(c.obstacles.empty());
  CHECK_FALSE(c.obstacle_generator.has_value());
}

TEST_CASE("overrides touch only the named parameter") {
  json doc = json::parse(kMinimal);
  doc["params"] = {{"delta", 2.0}};
  const ScenarioConfig c = load_scenario(doc.dump());
  Params expected;
  expected.delta = 2.0;
  CHECK(c.params == expected);
}

TEST_CASE("validation names the field and bound") {
  json doc = json::parse(kMinimal);
  doc["formations"][0]["radius"] = 0.3;
  try {
    load_scenario(doc.dump());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("formations[0].radius") != std::string::npos);
    CHECK(what.find("0.45") != std::string::npos);
  }

  doc = json::parse(kMinimal);
  doc["params"] = {{"k1", -1.0}};
  CHECK_THROWS_AS(load_scenario(doc.dump()), ValidationError);
  CHECK_THROWS_AS(load_scenario("{not json"), ValidationError);
  CHECK_THROWS_AS(load_scenario(R"({"formations": []})"), ValidationError);
  doc = json::parse(kMinimal);
  doc["formations"][0]["dest"] = {50, 0};
  CHECK_THROWS_AS(load_scenario(doc.dump()), ValidationError);
}

TEST_CASE("unknown keys are listed") {
  json doc = json::parse(kMinimal);
  doc["colour"] = "blue";
  doc["flavour"] = 1;
  try {
    load_scenario(doc.dump());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("unknown keys: colour, flavour") != std::string::npos);
  }
  doc.erase("colour");
  doc.erase("flavour");
  doc["params"] = {{"delta", 1.0}, {"deltaa", 2.0}};
  try {
    load_scenario(doc.dump());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("params") != std::string::npos);
    CHECK(what.find("deltaa") != std::string::npos);
  }
}

TEST_CASE("shape shorthand expands to an even ring") {
  json doc = json::parse(kMinimal);
  doc["formations"][0].erase("followers");
  doc["formations"][0]["shape"] = {{"followers", 4}, {"rho", 0.35}};
  const ScenarioConfig c = load_scenario(doc.dump());
  CHECK(c.formations[0].followers == ring_followers(4, 0.35));
}

TEST_CASE("write then load is the identity") {
  ScenarioConfig c;
  c.name = "round trip";
  c.seed = 123456789012345ULL;
  c.arena = {{-12.5, -7.25}, {12.5, 7.0 / 3.0}};
  c.obstacles = {{{1.0 / 3.0, -2.0 / 7.0}, 0.123456789}};
  ObstacleGenerator gen;
  gen.count = 3;
  gen.region = {{-2, -2}, {2, 2}};
  gen.keep_out = 0.75;
  gen.min_gap = 2.5;
  c.obstacle_generator = gen;
  FormationConfig f;
  f.id = 4;
  f.start = {0.1, 0.2, 2.0 / 3.0};
  f.dest = {-5.0 / 9.0, 1e-9};
  f.followers = ring_followers(3, 0.4);
  f.radius = 0.6 + 1e-12;
  f.follower_starts = {{0.3, 0.4, -1.0}};
  c.formations = {f};
  c.params.delta = 1.0 / 7.0;
  c.params.rrt.max_iters = 777;
  c.params.orca_margin = 0.05;
  const ScenarioConfig back = load_scenario(write_scenario(c));
  CHECK(back == c);
  CHECK(write_scenario(back) == write_scenario(c));
}

TEST_CASE("trajectory rows and round trip") {
  const sim::SimReport r = synthetic_report(100, 3);
  std::ostringstream out;
  write_trajectories(r, out);
  const std::string text = out.str();
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == kTrajectoryHeader);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
  }
  CHECK(rows == 300);

  std::istringstream in(text);
  const auto back = read_trajectories(in);
  REQUIRE(back.size() == r.trajectories.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i] == r.trajectories[i]);
  }
}

TEST_CASE("rows come out sorted") {
  sim::SimReport r = synthetic_report(3, 2);
  std::reverse(r.trajectories.begin(), r.trajectories.end());
  std::ostringstream out;
  write_trajectories(r, out);
  std::istringstream in(out.str());
  const auto back = read_trajectories(in);
  for (std::size_t i = 1; i < back.size(); ++i) {
    const auto& a = back[i - 1];
    const auto& b = back[i];
    CHECK(std::tie(a.step, a.formation_id, a.robot_id) < std::tie(b.step, b.formation_id, b.robot_id));
  }
}

TEST_CASE("an empty report gives a header-only table") {
  std::ostringstream out;
  write_trajectories(sim::SimReport{}, out);
  CHECK(out.str() == std::string(kTrajectoryHeader) + "\n");
}

TEST_CASE("doubles print in their shortest exact form") {
  for (double v : {0.0, 1.0, -0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, 0.0167}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("metrics of a short lone-formation run") {
  ScenarioConfig c = load_scenario(kMinimal);
  c.formations[0].dest = {1, 0};
  c.params.rrt.max_iters = 300;
  const sim::SimReport report = sim::run(c, {});
  REQUIRE(report.complete);
  const json m = json::parse(metrics_json(report));
  CHECK(m["collision_count"] == 0);
  CHECK(m["obstacle_penetrations"] == 0);
  CHECK(m["min_pairwise_clearance"].is_null());
  CHECK(m["series"]["min_pairwise_distance"].empty());
  REQUIRE(m["formations"].size() == 1);
  CHECK(m["formations"][0]["id"] == 1);
  CHECK(m["formations"][0]["arrived"] == true);
  CHECK(m["formations"][0]["time_to_goal"].get<double>() >= 1.0 / 0.03);
  REQUIRE(m["series"]["follower_distance"].size() == 1);
  const json& fd = m["series"]["follower_distance"][0];
  CHECK(fd["rho_d"] == 0.35);
  CHECK(fd["distance"].size() == m["series"]["time"].size());
}

TEST_CASE("files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "pts_scenario_test";
  std::filesystem::create_directories(dir);
  const sim::SimReport r = synthetic_report(5, 2);
  write_trajectories(r, dir / "t.csv");
  write_metrics(r, dir / "m.json");
  CHECK(std::filesystem::file_size(dir / "t.csv") > 0);
  std::ifstream metrics_in(dir / "m.json");
  CHECK_FALSE(json::parse(metrics_in).empty());
  CHECK_THROWS_AS(write_trajectories(r, dir / "missing" / "t.csv"), IoError);
  CHECK_THROWS_AS(load_scenario_file(dir / "nope.json"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shipped scenarios load") {
  for (const char* name : {"baseline", "four_swap", "obstacles", "thirty", "triangle", "square",
                           "circle"}) {
    INFO(name);
    const auto path = std::filesystem::path(PTS_SCENARIO_DIR) / (std::string(name) + ".json");
    CHECK_NOTHROW(load_scenario_file(path));
  }
}
