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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pts/errors.hpp"
#include "pts/orca.hpp"

using namespace pts;
using namespace pts::orca;

namespace {

/// Exact minimum of |t v - p| over t in [0, tau] via the closed form, used
/// with a slack to judge "outside the open VO" after floating-point work.
double min_separation(const Vec2& p, double tau, const Vec2& v) {
  const double ss = v.x * v.x + v.y * v.y;
  double t = 0.0;
  if (ss > 0.0) {
    t = std::clamp((v.x * p.x + v.y * p.y) / ss, 0.0, tau);
  }
  return std::hypot(t * v.x - p.x, t * v.y - p.y);
}

Formation make_formation(int id, Point2 pos, double theta, Point2 target) {
  Formation f;
  f.id = id;
  f.leader.pose = {pos.x, pos.y, theta};
  f.radius = 0.5;
  f.src = pos;
  f.dest = target;
  f.path = {pos, target};
  f.next_dest_index = 1;
  f.v_max = 0.03;
  f.v_pref = preferred_velocity(pos, target, 0.03, 1.0);
  f.velocity = f.v_pref;
  return f;
}

}  // namespace

TEST_CASE("velocity obstacle membership") {
  CHECK(vo_contains({{2, 0}, 1, 1}, {2, 0}));
  CHECK_FALSE(vo_contains({{2, 0}, 1, 1}, {0, 0}));
  CHECK_FALSE(vo_contains({{2, 0}, 1, 1}, {1, 0}));
  CHECK(vo_contains({{2, 0}, 1, 1}, {1.01, 0}));
  CHECK_FALSE(vo_contains({{2, 0}, 1, 1}, {-3, 0}));
}

TEST_CASE("membership agrees with dense sampling of t") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int disagreements = 0;
  int inside = 0;
  for (int k = 0; k < 10000; ++k) {
    const double r = 0.2 + 0.8 * (u(gen) + 1.0) / 2.0;
    Vec2 p{3.0 * u(gen), 3.0 * u(gen)};
    if (norm(p) <= r + 0.01) {
      p = p + (r + 0.5) * normalized(p + Vec2{1e-3, 0});
    }
    const double tau = 0.5 + 4.5 * (u(gen) + 1.0) / 2.0;
    const Vec2 v{2.0 * u(gen), 2.0 * u(gen)};
    const double sampled = oracle::dense_min_distance(p, tau, v, 2000);
    const bool got = vo_contains({p, r, tau}, v);
    inside += got ? 1 : 0;
    // Skip instances whose margin is below the sampling resolution.
    if (std::abs(sampled - r) < 1e-3 * (norm(v) * tau + 1.0)) {
      continue;
    }
    if (got != (sampled < r)) {
      ++disagreements;
    }
  }
  CHECK(disagreements == 0);
  CHECK(inside > 500);
}

TEST_CASE("compute_u on the leg for a velocity deep inside the cone") {
  const VelocityObstacle vo{{2, 0}, 1, 2};
  const OrcaResult res = compute_u(vo, {1.2, 0});
  CHECK_FALSE(res.colliding);
  CHECK(norm(res.u) == doctest::Approx(0.6));
  CHECK(std::abs(res.u.x) == doctest::Approx(0.3));
  CHECK(std::abs(res.u.y) == doctest::Approx(0.6 * std::sqrt(3.0) / 2.0));
  const auto samples = oracle::vo_boundary_samples(vo.p_rel, 1, 2, 3.0, 3000, 3500);
  const Vec2 q = Vec2{1.2, 0} + res.u;
  const Vec2 near = oracle::nearest_sample(samples, q);
  CHECK(distance(q, near) <= 1e-3);
}

TEST_CASE("compute_u on the cutoff arc for a velocity behind the origin") {
  const VelocityObstacle vo{{2, 0}, 1, 2};
  const OrcaResult res = compute_u(vo, {-5, 0});
  CHECK(res.u.x == doctest::Approx(5.5));
  CHECK(res.u.y == doctest::Approx(0.0));
  CHECK(res.n.x == doctest::Approx(-1.0));
  const Vec2 q = Vec2{-5, 0} + res.u;
  CHECK(q.x == doctest::Approx(0.5));
}

TEST_CASE("compute_u reaches the nearest sampled boundary point") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int worst_case = 0;
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double r = 0.1 + 0.9 * u01(gen);
    const double tau = 1.0 + 9.0 * u01(gen);
    const double a = 2.0 * kPi * u01(gen);
    const double dist = r + 0.05 + 4.0 * u01(gen);
    const Vec2 p{dist * std::cos(a), dist * std::sin(a)};
    const Vec2 v{4.0 * u01(gen) - 2.0, 4.0 * u01(gen) - 2.0};
    const VelocityObstacle vo{p, r, tau};
    const OrcaResult res = compute_u(vo, v);
    REQUIRE_FALSE(res.colliding);
    const double extent = norm(v) + 0.1;
    const auto samples = oracle::vo_boundary_samples(p, r, tau, extent, 3000, 3500);
    const Vec2 q = v + res.u;
    const Vec2 near = oracle::nearest_sample(samples, q);
    const Vec2 from_v = oracle::nearest_sample(samples, v);
    const double err = distance(q, near);
    if (err > worst) {
      worst = err;
      worst_case = k;
    }
    // |u| is the distance to the boundary: never more than the sampled nearest.
    CHECK(norm(res.u) <= distance(v, from_v) + 1e-9);
    CHECK(norm(res.u) >= distance(v, from_v) - 1e-3);
    // The normal points out of the cone.
    const double eps = 1e-4;
    CHECK_FALSE(vo_contains(vo, q + eps * res.n));
    CHECK(vo_contains(vo, q - eps * res.n));
  }
  INFO("worst instance " << worst_case);
  CHECK(worst <= 1e-3);
}

TEST_CASE("compute_u is odd in the relative quantities") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 p{3 + u(gen), 2 * u(gen)};
    const Vec2 v{u(gen), u(gen)};
    const OrcaResult a = compute_u({p, 1.0, 4.0}, v);
    const OrcaResult b = compute_u({-p, 1.0, 4.0}, -v);
    CHECK(a.u.x == doctest::Approx(-b.u.x).epsilon(1e-12));
    CHECK(a.u.y == doctest::Approx(-b.u.y).epsilon(1e-12));
  }
}

TEST_CASE("overlapping discs get a separating correction") {
  const OrcaResult res = compute_u({{0.5, 0}, 1.0, 11.0}, {0, 0}, 0.1);
  CHECK(res.colliding);
  // The normal points away from j, and v + u clears the overlap in one step.
  CHECK(res.n.x < 0.0);
  CHECK(norm(0.1 * res.u - Vec2{0.5, 0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(compute_u({{2, 0}, 0.0, 1.0}, {0, 0}), InvalidInput);
  CHECK_THROWS_AS(compute_u({{2, 0}, 1.0, 0.0}, {0, 0}), InvalidInput);
}

TEST_CASE("half-plane construction and responsibility") {
  // v_opt_rel = (0.5, 0) sits on the back of the cutoff arc, so u = 0.
  const HalfPlane on = orca_halfplane({0, 0}, {2, 0}, {0.5, 0}, {0, 0}, 0.5, 0.5, 2.0);
  CHECK(on.point.x == doctest::Approx(0.5));
  CHECK(on.point.y == doctest::Approx(0.0));

  const Point2 pi{0, 0};
  const Point2 pj{3, 0.4};
  const Vec2 vi{0.4, 0};
  const HalfPlane half = orca_halfplane(pi, pj, vi, {}, 0.6, 0.6, 5.0, 0.5);
  const HalfPlane full = orca_halfplane(pi, pj, vi, {}, 0.6, 0.6, 5.0, 1.0);
  const OrcaResult res = compute_u({pj - pi, 1.2, 5.0}, vi);
  CHECK(full.point.x - half.point.x == doctest::Approx(0.5 * res.u.x));
  CHECK(full.point.y - half.point.y == doctest::Approx(0.5 * res.u.y));
  CHECK(half.normal == res.n);

  const HalfPlane ob = obstacle_halfplane(pi, vi, 0.6, {pj, 0.6}, 5.0);
  CHECK(ob.point.x == doctest::Approx(vi.x + res.u.x));
  CHECK(ob.point.y == doctest::Approx(vi.y + res.u.y));
  CHECK_THROWS_AS(orca_halfplane(pi, pj, vi, {}, 0.6, 0.6, 0.0), InvalidInput);
  CHECK_THROWS_AS(obstacle_halfplane(pi, vi, 0.6, {pj, 0.6}, -1.0), InvalidInput);
}

TEST_CASE("obstacle half-planes") {
  // Heading at an obstacle 20 m away at 0.03 m/s: no contact within 5 s.
  const HalfPlane far = obstacle_halfplane({0, 0}, {0.03, 0}, 0.5, {{20, 0}, 1.0}, 5.0);
  CHECK(far.contains({0.03, 0}));

  // 1 m/s straight at an obstacle 3 m away does hit it within 5 s.
  const Vec2 v_opt{1.0, 0};
  const Obstacle ob{{3, 0}, 1.0};
  CHECK(vo_contains({ob.center, 1.5, 5.0}, v_opt));
  const HalfPlane h = obstacle_halfplane({0, 0}, v_opt, 0.5, ob, 5.0);
  CHECK_FALSE(h.contains(v_opt));
  const std::vector<HalfPlane> hs{h};
  const LpResult lp = solve_velocity_lp(hs, v_opt, 1.0);
  REQUIRE(lp.feasible);
  CHECK(min_separation(ob.center, 5.0, lp.velocity) >= 1.5 - 1e-9);
}

TEST_CASE("reciprocal half-planes keep pairs apart") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double tau = 11.0;
  int checked = 0;
  for (int k = 0; k < 2000; ++k) {
    const double ri = 0.3 + 0.3 * (u(gen) + 1.0);
    const double rj = 0.3 + 0.3 * (u(gen) + 1.0);
    const Point2 pi{3 * u(gen), 3 * u(gen)};
    const Point2 pj{3 * u(gen), 3 * u(gen)};
    if (distance(pi, pj) <= ri + rj + 0.01) {
      continue;
    }
    const Vec2 vi{0.03 * u(gen), 0.03 * u(gen)};
    const Vec2 vj{0.03 * u(gen), 0.03 * u(gen)};
    const std::vector<HalfPlane> hi{orca_halfplane(pi, pj, vi, vj, ri, rj, tau)};
    const std::vector<HalfPlane> hj{orca_halfplane(pj, pi, vj, vi, rj, ri, tau)};
    const Vec2 pref_i{0.03 * u(gen), 0.03 * u(gen)};
    const Vec2 pref_j{0.03 * u(gen), 0.03 * u(gen)};
    const LpResult li = solve_velocity_lp(hi, pref_i, 0.03);
    const LpResult lj = solve_velocity_lp(hj, pref_j, 0.03);
    if (!li.feasible || !lj.feasible) {
      continue;
    }
    ++checked;
    const double sep = min_separation(pj - pi, tau, li.velocity - lj.velocity);
    CHECK(sep >= ri + rj - 1e-9);
  }
  CHECK(checked > 1000);
}

TEST_CASE("head-on formations choose mutually safe velocities") {
  const Params params;
  Formation a = make_formation(0, {-1.5, 0}, 0.0, {10, 0});
  Formation b = make_formation(1, {1.5, 0}, kPi, {-10, 0});
  const std::vector<AgentSnapshot> snap_b{snapshot(b)};
  const std::vector<AgentSnapshot> snap_a{snapshot(a)};
  const LeaderDecision da = leader_velocity(a, snap_b, {}, params);
  const LeaderDecision db = leader_velocity(b, snap_a, {}, params);
  CHECK(da.feasible);
  CHECK(db.feasible);
  const Vec2 rel = da.v_star - db.v_star;
  CHECK(min_separation(b.position() - a.position(), params.tau, rel) >= 1.0 - 1e-9);
  // Mirror symmetry of the scenario carries over to the answers.
  CHECK(da.v_star.x == doctest::Approx(-db.v_star.x));
  CHECK(da.v_star.y == doctest::Approx(-db.v_star.y));
}

TEST_CASE("leader velocity without neighbours follows v_pref") {
  const Params params;
  Formation f = make_formation(0, {0, 0}, 0.0, {10, 0});
  const LeaderDecision d = leader_velocity(f, {}, {}, params);
  CHECK(d.cmd.v == doctest::Approx(0.03));
  CHECK(d.cmd.omega == doctest::Approx(0.0));
  CHECK_FALSE(d.waypoint_advanced);
  CHECK(d.next_dest_index == 1);

  f.v_pref = {0.02, 0};
  CHECK(leader_velocity(f, {}, {}, params).cmd.v == doctest::Approx(0.02));

  f.arrived = true;
  CHECK_THROWS_AS(leader_velocity(f, {}, {}, params), InvalidInput);
}

TEST_CASE("waypoint switch inside delta") {
  const Params params;
  Formation f = make_formation(0, {0, 0}, 0.0, {3, 0});
  f.path = {{0, 0}, {1.2, 0}, {1.2, 5}};
  f.next_dest_index = 1;
  f.v_pref = {0.03, 0};
  const LeaderDecision d = leader_velocity(f, {}, {}, params);
  CHECK(d.waypoint_advanced);
  CHECK(d.next_dest_index == 2);
  const Vec2 aim = normalized(Vec2{1.2, 5});
  CHECK(d.v_pref.x == doctest::Approx(0.03 * aim.x));
  CHECK(d.v_pref.y == doctest::Approx(0.03 * aim.y));

  // 1.4 m away: outside delta.
  f.path = {{0, 0}, {1.4, 0}, {1.4, 5}};
  CHECK_FALSE(leader_velocity(f, {}, {}, params).waypoint_advanced);

  // The last waypoint is never switched past.
  f.path = {{0, 0}, {1.0, 0}};
  const LeaderDecision last = leader_velocity(f, {}, {}, params);
  CHECK_FALSE(last.waypoint_advanced);
  CHECK(last.next_dest_index == 1);
}

TEST_CASE("obstacles beyond sensing range are ignored") {
  const Params params;
  Formation f = make_formation(0, {0, 0}, 0.0, {10, 0});
  // Contact within 5 s at 0.03 m/s is impossible either way, so both answers
  // match v_pref; an obstacle straddling the path ahead does bend the velocity.
  const std::vector<Obstacle> far{{{6.0, 0}, 0.5}};
  CHECK(leader_velocity(f, {}, far, params).v_star == f.v_pref);
  f.velocity = {0.03, 0};
  const std::vector<Obstacle> touching{{{0.62, 0}, 0.1}};
  const LeaderDecision d = leader_velocity(f, {}, touching, params);
  CHECK(min_separation(touching[0].center, params.tau_obstacle, d.v_star) >= 0.6 - 1e-9);
}

TEST_CASE("neighbour sets use a strict range") {
  std::vector<AgentSnapshot> snaps{{{0, 0}, {}, 0.5, false}, {{5, 0}, {}, 0.5, false}};
  CHECK(formation_neighbours(snaps, 0, 4.0).empty());
  snaps[1].position = {3, 0};
  CHECK(formation_neighbours(snaps, 0, 4.0) == std::vector<std::size_t>{1});
  CHECK(formation_neighbours(snaps, 1, 4.0) == std::vector<std::size_t>{0});
  snaps[1].position = {4, 0};
  CHECK(formation_neighbours(snaps, 0, 4.0).empty());
  snaps[1].position = {3, 0};
  snaps[1].arrived = true;
  CHECK(formation_neighbours(snaps, 0, 4.0).empty());
  CHECK_THROWS_AS(formation_neighbours(snaps, 2, 4.0), InvalidInput);

  std::vector<Formation> fs{make_formation(0, {0, 0}, 0, {1, 0}),
                            make_formation(1, {0, 3.5}, 0, {1, 0})};
  CHECK(formation_neighbours(std::span<const Formation>(fs), 0, 4.0) ==
        std::vector<std::size_t>{1});
}

TEST_CASE("unicycle mapping") {
  VelocityCmd c = to_nonholonomic({0.03, 0}, {0, 0, 0}, 0.03, 1.0);
  CHECK(c.v == doctest::Approx(0.03));
  CHECK(c.omega == 0.0);

  c = to_nonholonomic({0, 0.03}, {0, 0, 0}, 0.03, 1.0);
  CHECK(c.v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.omega == doctest::Approx(1.0));
  c = to_nonholonomic({0, -0.03}, {0, 0, 0}, 0.03, 5.0);
  CHECK(c.omega == doctest::Approx(-kPi));

  const double s = 0.03 / std::sqrt(2.0);
  c = to_nonholonomic({s, s}, {0, 0, 0}, 0.03, 1.0);
  CHECK(c.v == doctest::Approx(0.03 * std::cos(kPi / 4)));
  CHECK(c.omega == doctest::Approx(1.0));

  c = to_nonholonomic({0, 0}, {0, 0, 1.0}, 0.03, 1.0);
  CHECK(c.v == 0.0);
  CHECK(c.omega == 0.0);
  CHECK_THROWS_AS(to_nonholonomic({1, 0}, {}, 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(to_nonholonomic({1, 0}, {}, 1.0, 0.0), InvalidInput);
}

TEST_CASE("unicycle mapping saturates and never reverses") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 5000; ++k) {
    const Vec2 v{0.1 * u(gen), 0.1 * u(gen)};
    const Pose pose{0, 0, kPi * u(gen)};
    const double v_max = 0.01 + 0.05 * (u(gen) + 1.0);
    const double w_max = 0.1 + (u(gen) + 1.0);
    const VelocityCmd c = to_nonholonomic(v, pose, v_max, w_max);
    CHECK(c.v >= 0.0);
    CHECK(c.v <= v_max);
    CHECK(std::abs(c.omega) <= w_max);
    const double phi = angle_normalize(std::atan2(v.y, v.x) - pose.theta);
    if (std::abs(phi) > 1e-12) {
      CHECK((phi > 0) == (c.omega > 0));
    }
  }
}

TEST_CASE("leader decisions are reproducible bit for bit") {
  const Params params;
  Formation a = make_formation(0, {-1.2, 0.1}, 0.1, {10, 0});
  Formation b = make_formation(1, {1.3, -0.2}, 3.0, {-10, 0});
  const std::vector<AgentSnapshot> snaps{snapshot(b)};
  const std::vector<Obstacle> obs{{{0, 2}, 0.5}};
  const LeaderDecision x = leader_velocity(a, snaps, obs, params);
  const LeaderDecision y = leader_velocity(a, snaps, obs, params);
  CHECK(x.v_star == y.v_star);
  CHECK(x.cmd == y.cmd);
}
