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

#ifndef PTS_PLANNER_HPP
#define PTS_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pts/params.hpp"
#include "pts/types.hpp"

namespace pts::planner {

struct Bounds {
  Point2 min;
  Point2 max;

  bool contains(const Point2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool operator==(const Bounds&) const = default;
};

struct PlanNode {
  Point2 position;
  std::optional<std::size_t> parent;
  double cost = 0.0;  ///< path length from the root
};

struct Path {
  std::vector<Point2> points;

  double length() const;
};

struct PlanResult {
  Path path;
  std::vector<PlanNode> tree;
  double cost = 0.0;
};

/// Smallest distance from any point of segment [a, b] to `c`.
double segment_point_distance(const Point2& a, const Point2& b, const Point2& c);

/// True when every point of [a, b] keeps at least `clearance` from every obstacle boundary.
bool segment_free(const Point2& a, const Point2& b, std::span<const Obstacle> obstacles,
                  double clearance);

/// RRT* from src to dest. Obstacles are inflated by `clearance`. The random
/// stream depends only on `seed`, so a run with more iterations extends a run
/// with fewer. Throws InvalidInput for queries outside the free space and
/// PlanningFailure when the goal is never reached.
PlanResult plan_tree(const Point2& src, const Point2& dest, std::span<const Obstacle> obstacles,
                     const Bounds& bounds, double clearance, const RrtParams& params,
                     std::uint64_t seed);

Path plan(const Point2& src, const Point2& dest, std::span<const Obstacle> obstacles,
          const Bounds& bounds, double clearance, const RrtParams& params, std::uint64_t seed);

/// Resamples a polyline at arc-length multiples of `spacing`, keeping every vertex.
Path interpolate(const Path& path, double spacing);

}  // namespace pts::planner

#endif  // PTS_PLANNER_HPP
