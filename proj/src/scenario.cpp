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

#include "pts/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "pts/errors.hpp"

namespace pts::scenario {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

/// Six significant digits for error messages.
std::string brief(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// Reading

/// Reads one JSON object, remembering which keys were consumed so that the
/// rest can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ValidationError(path_.empty() ? "document" : path_, "expected an object");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      out = as_number(*v, field(key));
    }
  }

  void count(const std::string& key, std::size_t& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0)) {
        throw ValidationError(field(key), "expected a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  double required_number(const std::string& key) {
    const json* v = get(key);
    if (v == nullptr) {
      throw ValidationError(field(key), "missing required key");
    }
    return as_number(*v, field(key));
  }

  void finish() const {
    std::vector<std::string> unknown;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        unknown.push_back(it.key());
      }
    }
    if (!unknown.empty()) {
      std::string list;
      for (const auto& k : unknown) {
        list += (list.empty() ? "" : ", ") + k;
      }
      throw ValidationError(path_.empty() ? "document" : path_, "unknown keys: " + list);
    }
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) {
      throw ValidationError(where, "expected a number");
    }
    return v.get<double>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Point2 read_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) {
    throw ValidationError(where, "expected [x, y]");
  }
  return {ObjectReader::as_number(v[0], where + "[0]"), ObjectReader::as_number(v[1], where + "[1]")};
}

planner::Bounds read_bounds(const json& v, const std::string& where) {
  ObjectReader r(v, where);
  planner::Bounds b;
  const json* lo = r.get("min");
  const json* hi = r.get("max");
  if (lo == nullptr || hi == nullptr) {
    throw ValidationError(where, "min and max are required");
  }
  b.min = read_point(*lo, r.field("min"));
  b.max = read_point(*hi, r.field("max"));
  r.finish();
  return b;
}

Pose read_pose(const json& v, const std::string& where, bool theta_required) {
  ObjectReader r(v, where);
  Pose p;
  p.x = r.required_number("x");
  p.y = r.required_number("y");
  if (theta_required) {
    p.theta = r.required_number("theta");
  } else {
    p.theta = std::numeric_limits<double>::quiet_NaN();
    r.number("theta", p.theta);
  }
  r.finish();
  return p;
}

void read_params(const json& v, Params& p) {
  ObjectReader r(v, "params");
  r.number("k1", p.gains.k1);
  r.number("k2", p.gains.k2);
  r.number("k3", p.gains.k3);
  r.number("k4", p.gains.k4);
  r.number("k5", p.gains.k5);
  r.number("k6", p.gains.k6);
  r.number("delta", p.delta);
  r.number("tau", p.tau);
  r.number("dt", p.dt);
  r.number("tau_obstacle", p.tau_obstacle);
  r.number("maxspeed", p.maxspeed);
  r.number("neighbour_dist", p.neighbour_dist);
  r.number("omega_max", p.omega_max);
  r.number("leader_omega_max", p.leader_omega_max);
  r.number("follower_maxspeed", p.follower_maxspeed);
  r.number("waypoint_spacing", p.waypoint_spacing);
  r.number("goal_tolerance", p.goal_tolerance);
  r.number("tau_slow", p.tau_slow);
  r.number("k_omega", p.k_omega);
  r.number("orca_margin", p.orca_margin);
  r.number("plan_clearance", p.plan_clearance);
  r.number("right_hand_bias", p.right_hand_bias);
  r.count("max_steps", p.max_steps);
  r.count("trajectory_stride", p.trajectory_stride);
  r.count("metrics_stride", p.metrics_stride);
  if (const json* rrt = r.get("rrt")) {
    ObjectReader rr(*rrt, "params.rrt");
    rr.count("max_iters", p.rrt.max_iters);
    rr.number("step_eta", p.rrt.step_eta);
    rr.number("goal_bias", p.rrt.goal_bias);
    rr.number("rewire_gamma", p.rrt.rewire_gamma);
    rr.finish();
  }
  r.finish();
}

FormationConfig read_formation(const json& v, const std::string& where) {
  ObjectReader r(v, where);
  FormationConfig fc;
  const json* id = r.get("id");
  if (id == nullptr || !id->is_number_integer()) {
    throw ValidationError(r.field("id"), "expected an integer id");
  }
  fc.id = id->get<int>();

  const json* start = r.get("start");
  const json* dest = r.get("dest");
  if (start == nullptr || dest == nullptr) {
    throw ValidationError(where, "start and dest are required");
  }
  fc.start = read_pose(*start, r.field("start"), false);
  fc.dest = read_point(*dest, r.field("dest"));
  if (std::isnan(fc.start.theta)) {
    const Vec2 heading = fc.dest - fc.start.position();
    fc.start.theta = heading == Vec2{} ? 0.0 : std::atan2(heading.y, heading.x);
  }
  r.number("radius", fc.radius);
  r.number("body_radius", fc.body_radius);
  r.number("d", fc.d);

  const json* followers = r.get("followers");
  const json* shape = r.get("shape");
  if (followers != nullptr && shape != nullptr) {
    throw ValidationError(where, "give either followers or shape, not both");
  }
  if (followers != nullptr) {
    if (!followers->is_array()) {
      throw ValidationError(r.field("followers"), "expected an array");
    }
    for (std::size_t k = 0; k < followers->size(); ++k) {
      ObjectReader fr((*followers)[k], r.field("followers") + "[" + std::to_string(k) + "]");
      FollowerSpec spec;
      spec.rho_d = fr.required_number("rho");
      spec.psi_d = fr.required_number("psi");
      fr.finish();
      fc.followers.push_back(spec);
    }
  }
  if (shape != nullptr) {
    ObjectReader sr(*shape, r.field("shape"));
    std::size_t count = 0;
    double rho = 0.35;
    sr.count("followers", count);
    sr.number("rho", rho);
    sr.finish();
    fc.followers = ring_followers(count, rho);
  }
  if (const json* starts = r.get("follower_starts")) {
    if (!starts->is_array()) {
      throw ValidationError(r.field("follower_starts"), "expected an array");
    }
    for (std::size_t k = 0; k < starts->size(); ++k) {
      fc.follower_starts.push_back(
          read_pose((*starts)[k], r.field("follower_starts") + "[" + std::to_string(k) + "]", true));
    }
  }
  r.finish();
  return fc;
}

// ---------------------------------------------------------------------------
// Writing

ordered_json point_json(const Point2& p) { return ordered_json::array({p.x, p.y}); }

ordered_json bounds_json(const planner::Bounds& b) {
  ordered_json j;
  j["min"] = point_json(b.min);
  j["max"] = point_json(b.max);
  return j;
}

ordered_json pose_json(const Pose& p) {
  ordered_json j;
  j["x"] = p.x;
  j["y"] = p.y;
  j["theta"] = p.theta;
  return j;
}

ordered_json obstacle_json(const Obstacle& ob) {
  ordered_json j;
  j["center"] = point_json(ob.center);
  j["radius"] = ob.radius;
  return j;
}

/// JSON has no infinities; report them as null.
ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

void ensure_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(field, "must be > 0 (got " + format_double(v) + ")");
  }
}

void ensure_non_negative(double v, const std::string& field) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ValidationError(field, "must be >= 0 (got " + format_double(v) + ")");
  }
}

void ensure_finite(const Point2& p, const std::string& field) {
  if (!is_finite(p)) {
    throw ValidationError(field, "must be finite");
  }
}

void ensure_valid_bounds(const planner::Bounds& b, const std::string& field) {
  ensure_finite(b.min, field + ".min");
  ensure_finite(b.max, field + ".max");
  if (!(b.min.x < b.max.x) || !(b.min.y < b.max.y)) {
    throw ValidationError(field, "min must be below max on both axes");
  }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void validate(const ScenarioConfig& c) {
  ensure_valid_bounds(c.arena, "arena");

  const Params& p = c.params;
  const std::pair<double, const char*> gains[] = {{p.gains.k1, "params.k1"}, {p.gains.k2, "params.k2"},
                                                  {p.gains.k3, "params.k3"}, {p.gains.k4, "params.k4"},
                                                  {p.gains.k5, "params.k5"}, {p.gains.k6, "params.k6"}};
  for (const auto& [value, name] : gains) {
    ensure_positive(value, name);
  }
  ensure_positive(p.delta, "params.delta");
  ensure_positive(p.tau, "params.tau");
  ensure_positive(p.dt, "params.dt");
  ensure_positive(p.tau_obstacle, "params.tau_obstacle");
  ensure_positive(p.maxspeed, "params.maxspeed");
  ensure_positive(p.neighbour_dist, "params.neighbour_dist");
  ensure_positive(p.omega_max, "params.omega_max");
  ensure_positive(p.leader_omega_max, "params.leader_omega_max");
  ensure_positive(p.follower_maxspeed, "params.follower_maxspeed");
  ensure_positive(p.waypoint_spacing, "params.waypoint_spacing");
  ensure_positive(p.goal_tolerance, "params.goal_tolerance");
  ensure_positive(p.tau_slow, "params.tau_slow");
  ensure_positive(p.k_omega, "params.k_omega");
  ensure_non_negative(p.orca_margin, "params.orca_margin");
  ensure_non_negative(p.plan_clearance, "params.plan_clearance");
  if (!std::isfinite(p.right_hand_bias) || std::abs(p.right_hand_bias) >= kPi / 2) {
    throw ValidationError("params.right_hand_bias", "must lie in (-pi/2, pi/2)");
  }
  if (p.max_steps == 0) {
    throw ValidationError("params.max_steps", "must be > 0");
  }
  if (p.trajectory_stride == 0) {
    throw ValidationError("params.trajectory_stride", "must be > 0");
  }
  if (p.metrics_stride == 0) {
    throw ValidationError("params.metrics_stride", "must be > 0");
  }
  ensure_positive(p.rrt.step_eta, "params.rrt.step_eta");
  ensure_positive(p.rrt.rewire_gamma, "params.rrt.rewire_gamma");
  if (!(p.rrt.goal_bias >= 0.0 && p.rrt.goal_bias <= 1.0)) {
    throw ValidationError("params.rrt.goal_bias", "must lie in [0, 1]");
  }
  if (p.rrt.max_iters == 0) {
    throw ValidationError("params.rrt.max_iters", "must be > 0");
  }

  for (std::size_t i = 0; i < c.obstacles.size(); ++i) {
    const std::string f = "obstacles[" + std::to_string(i) + "]";
    ensure_finite(c.obstacles[i].center, f + ".center");
    ensure_positive(c.obstacles[i].radius, f + ".radius");
  }
  if (c.obstacle_generator) {
    const ObstacleGenerator& g = *c.obstacle_generator;
    ensure_positive(g.min_radius, "obstacle_generator.min_radius");
    ensure_positive(g.max_radius, "obstacle_generator.max_radius");
    if (g.max_radius < g.min_radius) {
      throw ValidationError("obstacle_generator.max_radius", "must be >= min_radius");
    }
    ensure_valid_bounds(g.region, "obstacle_generator.region");
    ensure_non_negative(g.keep_out, "obstacle_generator.keep_out");
    ensure_non_negative(g.min_gap, "obstacle_generator.min_gap");
  }

  if (c.formations.empty()) {
    throw ValidationError("formations", "at least one formation is required");
  }
  std::set<int> ids;
  for (std::size_t i = 0; i < c.formations.size(); ++i) {
    const FormationConfig& fc = c.formations[i];
    const std::string f = "formations[" + std::to_string(i) + "]";
    if (fc.id < 0 || !ids.insert(fc.id).second) {
      throw ValidationError(f + ".id", "ids must be unique and non-negative");
    }
    if (!std::isfinite(fc.start.x) || !std::isfinite(fc.start.y) || !std::isfinite(fc.start.theta)) {
      throw ValidationError(f + ".start", "must be finite");
    }
    ensure_finite(fc.dest, f + ".dest");
    if (!c.arena.contains(fc.start.position())) {
      throw ValidationError(f + ".start", "lies outside the arena");
    }
    if (!c.arena.contains(fc.dest)) {
      throw ValidationError(f + ".dest", "lies outside the arena");
    }
    ensure_positive(fc.body_radius, f + ".body_radius");
    ensure_positive(fc.d, f + ".d");
    double bound = fc.body_radius;
    for (std::size_t k = 0; k < fc.followers.size(); ++k) {
      const std::string ff = f + ".followers[" + std::to_string(k) + "]";
      ensure_positive(fc.followers[k].rho_d, ff + ".rho");
      if (!std::isfinite(fc.followers[k].psi_d)) {
        throw ValidationError(ff + ".psi", "must be finite");
      }
      bound = std::max(bound, fc.followers[k].rho_d + fc.body_radius);
    }
    if (!(fc.radius >= bound)) {
      throw ValidationError(f + ".radius", "must be >= " + brief(bound) +
                                               " (max rho + body_radius), got " +
                                               brief(fc.radius));
    }
    if (fc.follower_starts.size() > fc.followers.size()) {
      throw ValidationError(f + ".follower_starts", "more start poses than followers");
    }
  }
}

ScenarioConfig load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError("document", std::string("malformed JSON: ") + e.what());
  }

  ObjectReader r(doc, "");
  ScenarioConfig c;
  if (const json* name = r.get("name")) {
    if (!name->is_string()) {
      throw ValidationError("name", "expected a string");
    }
    c.name = name->get<std::string>();
  }
  if (const json* seed = r.get("seed")) {
    if (!seed->is_number_unsigned()) {
      throw ValidationError("seed", "expected a non-negative integer");
    }
    c.seed = seed->get<std::uint64_t>();
  }
  if (const json* arena = r.get("arena")) {
    c.arena = read_bounds(*arena, "arena");
  }
  if (const json* params = r.get("params")) {
    read_params(*params, c.params);
  }
  if (const json* obstacles = r.get("obstacles")) {
    if (!obstacles->is_array()) {
      throw ValidationError("obstacles", "expected an array");
    }
    for (std::size_t i = 0; i < obstacles->size(); ++i) {
      const std::string where = "obstacles[" + std::to_string(i) + "]";
      ObjectReader o((*obstacles)[i], where);
      Obstacle ob;
      const json* center = o.get("center");
      if (center == nullptr) {
        throw ValidationError(where + ".center", "missing required key");
      }
      ob.center = read_point(*center, where + ".center");
      ob.radius = o.required_number("radius");
      o.finish();
      c.obstacles.push_back(ob);
    }
  }
  if (const json* gen = r.get("obstacle_generator")) {
    ObjectReader g(*gen, "obstacle_generator");
    ObstacleGenerator og;
    og.region = c.arena;
    g.count("count", og.count);
    g.number("min_radius", og.min_radius);
    g.number("max_radius", og.max_radius);
    g.number("keep_out", og.keep_out);
    g.number("min_gap", og.min_gap);
    if (const json* region = g.get("region")) {
      og.region = read_bounds(*region, "obstacle_generator.region");
    }
    g.finish();
    c.obstacle_generator = og;
  }
  if (const json* formations = r.get("formations")) {
    if (!formations->is_array()) {
      throw ValidationError("formations", "expected an array");
    }
    for (std::size_t i = 0; i < formations->size(); ++i) {
      c.formations.push_back(read_formation((*formations)[i], "formations[" + std::to_string(i) + "]"));
    }
  }
  r.finish();
  validate(c);
  return c;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scenario " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string write_scenario(const ScenarioConfig& c) {
  ordered_json doc;
  doc["name"] = c.name;
  doc["seed"] = c.seed;
  doc["arena"] = bounds_json(c.arena);

  const Params& p = c.params;
  ordered_json params;
  params["k1"] = p.gains.k1;
  params["k2"] = p.gains.k2;
  params["k3"] = p.gains.k3;
  params["k4"] = p.gains.k4;
  params["k5"] = p.gains.k5;
  params["k6"] = p.gains.k6;
  params["delta"] = p.delta;
  params["tau"] = p.tau;
  params["dt"] = p.dt;
  params["tau_obstacle"] = p.tau_obstacle;
  params["maxspeed"] = p.maxspeed;
  params["neighbour_dist"] = p.neighbour_dist;
  params["omega_max"] = p.omega_max;
  params["leader_omega_max"] = p.leader_omega_max;
  params["follower_maxspeed"] = p.follower_maxspeed;
  params["waypoint_spacing"] = p.waypoint_spacing;
  params["goal_tolerance"] = p.goal_tolerance;
  params["tau_slow"] = p.tau_slow;
  params["k_omega"] = p.k_omega;
  params["orca_margin"] = p.orca_margin;
  params["plan_clearance"] = p.plan_clearance;
  params["right_hand_bias"] = p.right_hand_bias;
  params["max_steps"] = p.max_steps;
  params["trajectory_stride"] = p.trajectory_stride;
  params["metrics_stride"] = p.metrics_stride;
  ordered_json rrt;
  rrt["max_iters"] = p.rrt.max_iters;
  rrt["step_eta"] = p.rrt.step_eta;
  rrt["goal_bias"] = p.rrt.goal_bias;
  rrt["rewire_gamma"] = p.rrt.rewire_gamma;
  params["rrt"] = rrt;
  doc["params"] = params;

  doc["obstacles"] = ordered_json::array();
  for (const auto& ob : c.obstacles) {
    doc["obstacles"].push_back(obstacle_json(ob));
  }
  if (c.obstacle_generator) {
    const ObstacleGenerator& g = *c.obstacle_generator;
    ordered_json gen;
    gen["count"] = g.count;
    gen["min_radius"] = g.min_radius;
    gen["max_radius"] = g.max_radius;
    gen["region"] = bounds_json(g.region);
    gen["keep_out"] = g.keep_out;
    gen["min_gap"] = g.min_gap;
    doc["obstacle_generator"] = gen;
  }

  doc["formations"] = ordered_json::array();
  for (const auto& fc : c.formations) {
    ordered_json f;
    f["id"] = fc.id;
    f["start"] = pose_json(fc.start);
    f["dest"] = point_json(fc.dest);
    f["radius"] = fc.radius;
    f["body_radius"] = fc.body_radius;
    f["d"] = fc.d;
    f["followers"] = ordered_json::array();
    for (const auto& spec : fc.followers) {
      ordered_json s;
      s["rho"] = spec.rho_d;
      s["psi"] = spec.psi_d;
      f["followers"].push_back(s);
    }
    if (!fc.follower_starts.empty()) {
      f["follower_starts"] = ordered_json::array();
      for (const auto& pose : fc.follower_starts) {
        f["follower_starts"].push_back(pose_json(pose));
      }
    }
    doc["formations"].push_back(f);
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Trajectories

void write_trajectories(const sim::SimReport& report, std::ostream& out) {
  std::vector<const sim::TrajectoryRow*> rows;
  rows.reserve(report.trajectories.size());
  for (const auto& row : report.trajectories) {
    rows.push_back(&row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    return std::tie(a->step, a->formation_id, a->robot_id) <
           std::tie(b->step, b->formation_id, b->robot_id);
  });

  out << kTrajectoryHeader << '\n';
  std::string line;
  for (const auto* row : rows) {
    line.clear();
    line += std::to_string(row->step);
    line += ',';
    line += format_double(row->time);
    line += ',';
    line += std::to_string(row->formation_id);
    line += ',';
    line += std::to_string(row->robot_id);
    line += row->role == sim::Role::kLeader ? ",leader," : ",follower,";
    line += format_double(row->pose.x);
    line += ',';
    line += format_double(row->pose.y);
    line += ',';
    line += format_double(row->pose.theta);
    line += ',';
    line += format_double(row->cmd.v);
    line += ',';
    line += format_double(row->cmd.omega);
    line += '\n';
    out << line;
  }
}

void write_trajectories(const sim::SimReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  write_trajectories(report, out);
  check_written(out, path);
}

namespace {

double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidInput("trajectories line " + std::to_string(line_no) + ": bad number '" +
                       std::string(s) + "'");
  }
  return v;
}

long long parse_int(std::string_view s, std::size_t line_no) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidInput("trajectories line " + std::to_string(line_no) + ": bad integer '" +
                       std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<sim::TrajectoryRow> read_trajectories(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw InvalidInput("trajectories: missing or unexpected header");
  }
  std::vector<sim::TrajectoryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cells.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cells.push_back(rest);
    if (cells.size() != 10) {
      throw InvalidInput("trajectories line " + std::to_string(line_no) + ": expected 10 fields");
    }
    sim::TrajectoryRow row;
    row.step = static_cast<std::size_t>(parse_int(cells[0], line_no));
    row.time = parse_double(cells[1], line_no);
    row.formation_id = static_cast<int>(parse_int(cells[2], line_no));
    row.robot_id = static_cast<int>(parse_int(cells[3], line_no));
    if (cells[4] == "leader") {
      row.role = sim::Role::kLeader;
    } else if (cells[4] == "follower") {
      row.role = sim::Role::kFollower;
    } else {
      throw InvalidInput("trajectories line " + std::to_string(line_no) + ": unknown role");
    }
    row.pose = {parse_double(cells[5], line_no), parse_double(cells[6], line_no),
                parse_double(cells[7], line_no)};
    row.cmd = {parse_double(cells[8], line_no), parse_double(cells[9], line_no)};
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Metrics

std::string metrics_json(const sim::SimReport& report) {
  ordered_json doc;
  doc["scenario"] = report.scenario;
  doc["seed"] = report.seed;
  doc["dt"] = report.dt;
  doc["steps"] = report.steps;
  doc["complete"] = report.complete;
  doc["collision_count"] = report.collision_count;
  doc["obstacle_penetrations"] = report.obstacle_penetrations;
  doc["min_pairwise_clearance"] = finite_or_null(report.min_pairwise_clearance);
  doc["min_obstacle_clearance"] = finite_or_null(report.min_obstacle_clearance);
  doc["rigidity_transient"] = report.rigidity_transient;

  doc["obstacles"] = ordered_json::array();
  for (const auto& ob : report.obstacles) {
    doc["obstacles"].push_back(obstacle_json(ob));
  }

  doc["formations"] = ordered_json::array();
  for (const auto& f : report.formations) {
    ordered_json j;
    j["id"] = f.id;
    j["radius"] = f.radius;
    j["robots"] = f.robots;
    j["arrived"] = f.arrived;
    j["time_to_goal"] = f.time_to_goal ? ordered_json(*f.time_to_goal) : ordered_json(nullptr);
    j["planned_length"] = f.planned_length;
    j["waypoints"] = ordered_json::array();
    for (const auto& w : f.waypoints) {
      j["waypoints"].push_back(point_json(w));
    }
    doc["formations"].push_back(j);
  }

  ordered_json series;
  series["stride"] = report.series_stride;
  series["time"] = report.series_time;
  series["min_pairwise_distance"] = ordered_json::array();
  for (const auto& s : report.min_pairwise_distance) {
    ordered_json j;
    j["formation_id"] = s.formation_id;
    j["distance"] = s.distance;
    j["threshold"] = s.threshold;
    series["min_pairwise_distance"].push_back(j);
  }
  series["follower_distance"] = ordered_json::array();
  for (const auto& s : report.follower_distance) {
    ordered_json j;
    j["formation_id"] = s.formation_id;
    j["robot_id"] = s.robot_id;
    j["rho_d"] = s.rho_d;
    j["min_after_transient"] = finite_or_null(s.min_after_transient);
    j["max_after_transient"] = finite_or_null(s.max_after_transient);
    j["distance"] = s.distance;
    series["follower_distance"].push_back(j);
  }
  doc["series"] = series;
  return doc.dump(1) + "\n";
}

void write_metrics(const sim::SimReport& report, std::ostream& out) { out << metrics_json(report); }

void write_metrics(const sim::SimReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  write_metrics(report, out);
  check_written(out, path);
}

}  // namespace pts::scenario
