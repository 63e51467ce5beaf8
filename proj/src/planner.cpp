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

#include "pts/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pts/errors.hpp"
#include "pts/rng.hpp"

namespace pts::planner {

double Path::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += distance(points[i - 1], points[i]);
  }
  return total;
}

double segment_point_distance(const Point2& a, const Point2& b, const Point2& c) {
  const Vec2 ab = b - a;
  const double len_sq = abs_sq(ab);
  if (len_sq == 0.0) {
    return distance(a, c);
  }
  const double t = std::clamp(dot(c - a, ab) / len_sq, 0.0, 1.0);
  return distance(a + t * ab, c);
}

bool segment_free(const Point2& a, const Point2& b, std::span<const Obstacle> obstacles,
                  double clearance) {
  return std::all_of(obstacles.begin(), obstacles.end(), [&](const Obstacle& ob) {
    return segment_point_distance(a, b, ob.center) >= ob.radius + clearance;
  });
}

namespace {

bool point_free(const Point2& p, std::span<const Obstacle> obstacles, double clearance) {
  return segment_free(p, p, obstacles, clearance);
}

class Tree {
 public:
  explicit Tree(const Point2& root) {
    nodes_.push_back({root, std::nullopt, 0.0});
    children_.emplace_back();
  }

  std::size_t size() const { return nodes_.size(); }
  const PlanNode& operator[](std::size_t i) const { return nodes_[i]; }

  std::size_t nearest(const Point2& p) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double d = abs_sq(nodes_[i].position - p);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  std::vector<std::size_t> near(const Point2& p, double radius) const {
    std::vector<std::size_t> out;
    const double r_sq = radius * radius;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (abs_sq(nodes_[i].position - p) <= r_sq) {
        out.push_back(i);
      }
    }
    return out;
  }

  std::size_t add(const Point2& p, std::size_t parent) {
    nodes_.push_back({p, parent, nodes_[parent].cost + distance(nodes_[parent].position, p)});
    children_.emplace_back();
    children_[parent].push_back(nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  void reparent(std::size_t node, std::size_t new_parent) {
    auto& old_children = children_[*nodes_[node].parent];
    old_children.erase(std::find(old_children.begin(), old_children.end(), node));
    nodes_[node].parent = new_parent;
    children_[new_parent].push_back(node);
    propagate(node);
  }

  std::vector<PlanNode> release() && { return std::move(nodes_); }

 private:
  /// Recomputes the costs of `node` and its whole subtree from their parents.
  void propagate(std::size_t node) {
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      const PlanNode& parent = nodes_[*nodes_[n].parent];
      nodes_[n].cost = parent.cost + distance(parent.position, nodes_[n].position);
      stack.insert(stack.end(), children_[n].begin(), children_[n].end());
    }
  }

  std::vector<PlanNode> nodes_;
  std::vector<std::vector<std::size_t>> children_;
};

}  // namespace

PlanResult plan_tree(const Point2& src, const Point2& dest, std::span<const Obstacle> obstacles,
                     const Bounds& bounds, double clearance, const RrtParams& params,
                     std::uint64_t seed) {
  if (!is_finite(src) || !is_finite(dest) || !bounds.contains(src) || !bounds.contains(dest)) {
    throw InvalidInput("plan: src and dest must lie inside the arena");
  }
  if (!point_free(src, obstacles, clearance)) {
    throw InvalidInput("plan: src lies inside an inflated obstacle");
  }
  if (!point_free(dest, obstacles, clearance)) {
    throw InvalidInput("plan: dest lies inside an inflated obstacle");
  }
  if (!(params.step_eta > 0.0) || params.goal_bias < 0.0 || params.goal_bias > 1.0 ||
      !(params.rewire_gamma > 0.0)) {
    throw InvalidInput("plan: invalid RRT* parameters");
  }

  Rng rng(seed);
  Tree tree(src);
  const double eta = params.step_eta;

  for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
    // Both draws are consumed every iteration so the stream is independent of the branch.
    const bool to_goal = rng.uniform() < params.goal_bias;
    const Point2 uniform{rng.uniform(bounds.min.x, bounds.max.x),
                         rng.uniform(bounds.min.y, bounds.max.y)};
    const Point2 sample = to_goal ? dest : uniform;

    const std::size_t nearest = tree.nearest(sample);
    const Point2 from = tree[nearest].position;
    const double gap = distance(from, sample);
    if (gap == 0.0) {
      continue;
    }
    const Point2 candidate = gap > eta ? from + (eta / gap) * (sample - from) : sample;
    if (!segment_free(from, candidate, obstacles, clearance)) {
      continue;
    }

    const double n = static_cast<double>(tree.size());
    const double radius = std::min(params.rewire_gamma * std::sqrt(std::log(n) / n), eta);
    std::vector<std::size_t> near = tree.near(candidate, radius);

    // Choose the cheapest collision-free parent.
    std::size_t parent = nearest;
    double parent_cost = tree[nearest].cost + distance(from, candidate);
    for (std::size_t idx : near) {
      const double c = tree[idx].cost + distance(tree[idx].position, candidate);
      if (c < parent_cost && segment_free(tree[idx].position, candidate, obstacles, clearance)) {
        parent = idx;
        parent_cost = c;
      }
    }
    const std::size_t added = tree.add(candidate, parent);

    for (std::size_t idx : near) {
      if (idx == parent) {
        continue;
      }
      const double via = tree[added].cost + distance(candidate, tree[idx].position);
      if (via < tree[idx].cost &&
          segment_free(candidate, tree[idx].position, obstacles, clearance)) {
        tree.reparent(idx, added);
      }
    }
  }

  std::optional<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const double gap = distance(tree[i].position, dest);
    if (gap > eta) {
      continue;
    }
    const double c = tree[i].cost + gap;
    if (c < best_cost && segment_free(tree[i].position, dest, obstacles, clearance)) {
      best = i;
      best_cost = c;
    }
  }
  if (!best) {
    throw PlanningFailure("plan: goal not reached after " + std::to_string(params.max_iters) +
                              " iterations",
                          params.max_iters);
  }

  PlanResult out;
  std::vector<Point2> reversed;
  if (tree[*best].position != dest) {
    reversed.push_back(dest);
  }
  for (std::optional<std::size_t> i = best; i; i = tree[*i].parent) {
    reversed.push_back(tree[*i].position);
  }
  out.path.points.assign(reversed.rbegin(), reversed.rend());
  out.cost = best_cost;
  out.tree = std::move(tree).release();
  return out;
}

Path plan(const Point2& src, const Point2& dest, std::span<const Obstacle> obstacles,
          const Bounds& bounds, double clearance, const RrtParams& params, std::uint64_t seed) {
  return plan_tree(src, dest, obstacles, bounds, clearance, params, seed).path;
}

Path interpolate(const Path& path, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidInput("interpolate: spacing must be > 0");
  }
  if (path.points.empty()) {
    return path;
  }
  const double total = path.length();
  if (total == 0.0) {
    return Path{{path.points.front()}};
  }

  Path out;
  out.points.push_back(path.points.front());
  const double tol = 1e-9 * std::max(1.0, total);
  double start = 0.0;  // arc length at the beginning of the current segment
  std::size_t k = 1;   // next sample sits at arc length k * spacing
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const Point2& a = path.points[i - 1];
    const Point2& b = path.points[i];
    const double len = distance(a, b);
    if (len == 0.0) {
      continue;
    }
    const double end = start + len;
    for (double s = k * spacing; s < end - tol; s = ++k * spacing) {
      out.points.push_back(a + ((s - start) / len) * (b - a));
    }
    out.points.push_back(b);
    if (k * spacing <= end + tol) {
      ++k;  // the vertex coincides with a sample
    }
    start = end;
  }
  return out;
}

}  // namespace pts::planner
