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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pts/errors.hpp"
#include "pts/formation_control.hpp"
#include "pts/kinematics.hpp"
#include "pts/orca.hpp"
#include "pts/planner.hpp"
#include "pts/scenario.hpp"
#include "pts/sim.hpp"

namespace py = pybind11;
using namespace pts;

namespace {

py::dict report_summary(const sim::SimReport& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["seed"] = r.seed;
  d["steps"] = r.steps;
  d["complete"] = r.complete;
  d["collision_count"] = r.collision_count;
  d["min_pairwise_clearance"] = r.min_pairwise_clearance;
  d["min_obstacle_clearance"] = r.min_obstacle_clearance;
  py::dict times;
  for (const auto& f : r.formations) {
    times[py::int_(f.id)] = f.time_to_goal ? py::cast(*f.time_to_goal) : py::none();
  }
  d["time_to_goal"] = times;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-formation payload transport traffic simulator";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<SingularConfiguration>(m, "SingularConfiguration", base.ptr());
  py::register_exception<PlanningFailure>(m, "PlanningFailure", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("__iter__", [](const Vec2& v) { return py::iter(py::make_tuple(v.x, v.y)); })
      .def("__repr__", [](const Vec2& v) {
        return "Vec2(" + scenario::format_double(v.x) + ", " + scenario::format_double(v.y) + ")";
      });
  py::implicitly_convertible<py::tuple, Vec2>();

  py::class_<Pose>(m, "Pose")
      .def(py::init([](double x, double y, double theta) { return Pose{x, y, theta}; }),
           py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("theta") = 0.0)
      .def_readwrite("x", &Pose::x)
      .def_readwrite("y", &Pose::y)
      .def_readwrite("theta", &Pose::theta)
      .def("__repr__", [](const Pose& p) {
        return "Pose(" + scenario::format_double(p.x) + ", " + scenario::format_double(p.y) + ", " +
               scenario::format_double(p.theta) + ")";
      });

  py::class_<VelocityCmd>(m, "VelocityCmd")
      .def(py::init([](double v, double omega) { return VelocityCmd{v, omega}; }),
           py::arg("v") = 0.0, py::arg("omega") = 0.0)
      .def_readwrite("v", &VelocityCmd::v)
      .def_readwrite("omega", &VelocityCmd::omega);

  py::class_<FollowerSpec>(m, "FollowerSpec")
      .def(py::init([](double rho, double psi) { return FollowerSpec{rho, psi}; }),
           py::arg("rho_d"), py::arg("psi_d"))
      .def_readwrite("rho_d", &FollowerSpec::rho_d)
      .def_readwrite("psi_d", &FollowerSpec::psi_d);

  py::class_<GainSet>(m, "GainSet")
      .def(py::init<>())
      .def_readwrite("k1", &GainSet::k1)
      .def_readwrite("k2", &GainSet::k2)
      .def_readwrite("k3", &GainSet::k3)
      .def_readwrite("k4", &GainSet::k4)
      .def_readwrite("k5", &GainSet::k5)
      .def_readwrite("k6", &GainSet::k6);

  py::class_<Obstacle>(m, "Obstacle")
      .def(py::init([](Vec2 c, double r) { return Obstacle{c, r}; }), py::arg("center"),
           py::arg("radius"))
      .def_readwrite("center", &Obstacle::center)
      .def_readwrite("radius", &Obstacle::radius);

  py::class_<HalfPlane>(m, "HalfPlane")
      .def(py::init(&HalfPlane::make), py::arg("point"), py::arg("normal"))
      .def_readonly("point", &HalfPlane::point)
      .def_readonly("normal", &HalfPlane::normal)
      .def("violation", &HalfPlane::violation);

  m.def("angle_normalize", &angle_normalize, py::arg("theta"));

  m.def(
      "pose_derivative",
      [](const Pose& p, const VelocityCmd& c, double d) {
        const auto r = kinematics::pose_derivative(p, c, d);
        return py::make_tuple(r.dx, r.dy, r.dtheta);
      },
      py::arg("pose"), py::arg("cmd"), py::arg("d"));
  m.def("integrate", &kinematics::integrate, py::arg("pose"), py::arg("cmd"), py::arg("d"),
        py::arg("dt"));

  py::class_<formation::TrackingErrors>(m, "TrackingErrors")
      .def(py::init<>())
      .def_readwrite("alpha", &formation::TrackingErrors::alpha)
      .def_readwrite("beta", &formation::TrackingErrors::beta)
      .def_readwrite("theta_ij", &formation::TrackingErrors::theta_ij)
      .def_readwrite("theta_je", &formation::TrackingErrors::theta_je)
      .def_readwrite("x_je", &formation::TrackingErrors::x_je)
      .def_readwrite("y_je", &formation::TrackingErrors::y_je);

  m.def("desired_follower_pose", &formation::desired_follower_pose, py::arg("leader"),
        py::arg("spec"));
  m.def("tracking_errors", &formation::tracking_errors, py::arg("leader"), py::arg("follower"),
        py::arg("spec"));
  m.def(
      "follower_cmd",
      [](const VelocityCmd& leader_cmd, const formation::TrackingErrors& e, const GainSet& g,
         const FollowerSpec& spec, double d, double v_max, double omega_max) {
        return formation::follower_cmd(leader_cmd, e, g, spec, d, {v_max, omega_max});
      },
      py::arg("leader_cmd"), py::arg("errors"), py::arg("gains"), py::arg("spec"), py::arg("d"),
      py::arg("v_max") = 0.06, py::arg("omega_max") = 1.0);

  m.def(
      "vo_contains",
      [](Vec2 p_rel, double r_sum, double tau, Vec2 v_rel) {
        return orca::vo_contains({p_rel, r_sum, tau}, v_rel);
      },
      py::arg("p_rel"), py::arg("r_sum"), py::arg("tau"), py::arg("v_rel"));
  m.def(
      "compute_u",
      [](Vec2 p_rel, double r_sum, double tau, Vec2 v_opt_rel, double collision_dt) {
        const auto r = orca::compute_u({p_rel, r_sum, tau}, v_opt_rel, collision_dt);
        return py::make_tuple(r.u, r.n);
      },
      py::arg("p_rel"), py::arg("r_sum"), py::arg("tau"), py::arg("v_opt_rel"),
      py::arg("collision_dt") = 0.0167);
  m.def("orca_halfplane", &orca::orca_halfplane, py::arg("p_i"), py::arg("p_j"),
        py::arg("v_i_opt"), py::arg("v_j_opt"), py::arg("r_i"), py::arg("r_j"), py::arg("tau"),
        py::arg("responsibility") = 0.5, py::arg("collision_dt") = 0.0167);
  m.def("obstacle_halfplane", &orca::obstacle_halfplane, py::arg("p_i"), py::arg("v_i_opt"),
        py::arg("r_i"), py::arg("obstacle"), py::arg("tau_obstacle"),
        py::arg("collision_dt") = 0.0167);
  m.def(
      "solve_velocity_lp",
      [](const std::vector<HalfPlane>& hs, Vec2 v_pref, double v_max) {
        const auto r = orca::solve_velocity_lp(hs, v_pref, v_max);
        return py::make_tuple(r.velocity, r.feasible);
      },
      py::arg("halfplanes"), py::arg("v_pref"), py::arg("v_max"));
  m.def("to_nonholonomic", &orca::to_nonholonomic, py::arg("v_star"), py::arg("pose"),
        py::arg("v_max"), py::arg("omega_max"), py::arg("k_omega") = 2.0);

  m.def(
      "plan",
      [](Vec2 src, Vec2 dest, const std::vector<Obstacle>& obstacles, Vec2 lo, Vec2 hi,
         double clearance, std::size_t max_iters, std::uint64_t seed) {
        RrtParams p;
        p.max_iters = max_iters;
        return planner::plan(src, dest, obstacles, {lo, hi}, clearance, p, seed).points;
      },
      py::arg("src"), py::arg("dest"), py::arg("obstacles"), py::arg("bounds_min"),
      py::arg("bounds_max"), py::arg("clearance"), py::arg("max_iters") = 10000,
      py::arg("seed") = 1);
  m.def(
      "interpolate",
      [](const std::vector<Vec2>& pts, double spacing) {
        return planner::interpolate(planner::Path{pts}, spacing).points;
      },
      py::arg("points"), py::arg("spacing"));

  m.def(
      "validate_scenario",
      [](const std::string& text) { return scenario::write_scenario(scenario::load_scenario(text)); },
      py::arg("text"), "Validates a scenario document and returns its canonical form.");
  m.def(
      "simulate",
      [](const std::string& text, std::optional<std::uint64_t> seed,
         std::optional<std::size_t> max_steps, std::optional<std::filesystem::path> out_dir) {
        const ScenarioConfig config = scenario::load_scenario(text);
        sim::RunOptions options;
        options.seed = seed;
        options.max_steps = max_steps;
        options.threads = sim::Executor::threads_from_env();
        sim::SimReport report;
        {
          py::gil_scoped_release release;
          report = sim::run(config, options);
        }
        if (out_dir) {
          std::filesystem::create_directories(*out_dir);
          scenario::write_trajectories(report, *out_dir / "trajectories.csv");
          scenario::write_metrics(report, *out_dir / "metrics.json");
        }
        return report_summary(report);
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("max_steps") = py::none(),
      py::arg("out_dir") = py::none(),
      "Runs a scenario document; optionally writes trajectories.csv and metrics.json.");
}
