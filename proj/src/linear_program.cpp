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

// Incremental 2D linear program over ORCA half-planes inside the speed disc,
// with a 3D fallback that minimizes the largest violation when the
// constraints are jointly infeasible.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pts/errors.hpp"
#include "pts/orca.hpp"

namespace pts::orca {
namespace {

constexpr double kParallelEps = 1e-12;

/// Directed-line form of a half-plane: feasible side on the left of `direction`.
struct Line {
  Vec2 point;
  Vec2 direction;
};

Line to_line(const HalfPlane& h) { return {h.point, Vec2{h.normal.y, -h.normal.x}}; }

/// Optimizes along line `line_no` subject to lines [0, line_no) and the disc.
bool solve_on_line(const std::vector<Line>& lines, std::size_t line_no, double radius,
                   const Vec2& opt, bool direction_opt, Vec2& result) {
  const Line& line = lines[line_no];
  const double dot_product = dot(line.point, line.direction);
  const double discriminant = dot_product * dot_product + radius * radius - abs_sq(line.point);
  if (discriminant < 0.0) {
    return false;  // speed disc misses the line entirely
  }

  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dot_product - sqrt_disc;
  double t_right = -dot_product + sqrt_disc;

  for (std::size_t i = 0; i < line_no; ++i) {
    const double denominator = det(line.direction, lines[i].direction);
    const double numerator = det(lines[i].direction, line.point - lines[i].point);

    if (std::fabs(denominator) <= kParallelEps) {
      if (numerator < 0.0) {
        return false;
      }
      continue;
    }

    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) {
      return false;
    }
  }

  if (direction_opt) {
    result = line.point + (dot(opt, line.direction) > 0.0 ? t_right : t_left) * line.direction;
  } else {
    const double t = std::clamp(dot(line.direction, opt - line.point), t_left, t_right);
    result = line.point + t * line.direction;
  }
  return true;
}

/// Returns lines.size() on success, otherwise the index of the first line that failed.
std::size_t solve_2d(const std::vector<Line>& lines, double radius, const Vec2& opt,
                     bool direction_opt, Vec2& result) {
  if (direction_opt) {
    result = opt * radius;
  } else if (abs_sq(opt) > radius * radius) {
    result = normalized(opt) * radius;
  } else {
    result = opt;
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) > 0.0) {
      const Vec2 previous = result;
      if (!solve_on_line(lines, i, radius, opt, direction_opt, result)) {
        result = previous;
        return i;
      }
    }
  }
  return lines.size();
}

/// Minimizes the largest violation, starting from the partial solution of solve_2d.
void solve_min_violation(const std::vector<Line>& lines, std::size_t begin_line, double radius,
                         Vec2& result) {
  double distance = 0.0;

  for (std::size_t i = begin_line; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) <= distance) {
      continue;
    }
    // Project lines [0, i) onto the bisectors with line i.
    std::vector<Line> projected;
    projected.reserve(i);
    for (std::size_t j = 0; j < i; ++j) {
      Line line;
      const double determinant = det(lines[i].direction, lines[j].direction);
      if (std::fabs(determinant) <= kParallelEps) {
        if (dot(lines[i].direction, lines[j].direction) > 0.0) {
          continue;  // same direction: j never binds before i
        }
        line.point = 0.5 * (lines[i].point + lines[j].point);
      } else {
        line.point = lines[i].point +
                     (det(lines[j].direction, lines[i].point - lines[j].point) / determinant) *
                         lines[i].direction;
      }
      line.direction = normalized(lines[j].direction - lines[i].direction);
      projected.push_back(line);
    }

    const Vec2 previous = result;
    if (solve_2d(projected, radius, perp(lines[i].direction), true, result) < projected.size()) {
      // Only reachable through rounding; the previous point is already optimal for lines [0, i).
      result = previous;
    }
    distance = det(lines[i].direction, lines[i].point - result);
  }
}

}  // namespace

double max_violation(std::span<const HalfPlane> halfplanes, const PlanarVelocity& v) {
  double worst = 0.0;
  for (const auto& h : halfplanes) {
    worst = std::max(worst, h.violation(v));
  }
  return worst;
}

LpResult solve_velocity_lp(std::span<const HalfPlane> halfplanes, const PlanarVelocity& v_pref,
                           double v_max) {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw InvalidInput("solve_velocity_lp: v_max must be > 0");
  }
  if (!is_finite(v_pref)) {
    throw InvalidInput("solve_velocity_lp: v_pref must be finite");
  }
  std::vector<Line> lines;
  lines.reserve(halfplanes.size());
  for (const auto& h : halfplanes) {
    if (!is_finite(h.point) || !is_finite(h.normal)) {
      throw InvalidInput("solve_velocity_lp: non-finite half-plane");
    }
    lines.push_back(to_line(h));
  }

  LpResult out;
  const std::size_t failed = solve_2d(lines, v_max, v_pref, false, out.velocity);
  if (failed < lines.size()) {
    out.feasible = false;
    solve_min_violation(lines, failed, v_max, out.velocity);
  }
  return out;
}

}  // namespace pts::orca
