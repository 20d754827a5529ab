#pragma once

#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "pump/geom.hpp"
#include "pump/lti.hpp"
#include "pump/sample.hpp"

namespace pump {

using nlohmann::json;

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Seeds {
  std::uint64_t bank = 1;
  std::uint64_t mc = 2;
  std::uint64_t rrt = 3;
};

struct RrtConfig {
  int trials = 1000;
  int max_iterations = 200;
  double goal_bias = 0.05;
};

struct Scenario {
  std::string name;
  Workspace workspace;
  State x_init;
  GoalRegion goal;

  MatrixXd process_noise;      // V_c, d x d
  MatrixXd measurement_noise;  // W_c, dw x dw
  MatrixXd initial_covariance; // Sigma_0, d x d
  LqgWeights tracking;

  double dt = 0.1;
  int samples = 1000;
  double connection_radius = 0;  // 0: use suggested_connection_radius
  double alpha = 0.05;
  double eta = 0;  // 0: 2 for alpha >= 1%, 10 below
  double lambda = 0.5;
  int particles = 128;
  int mc_samples = 10000;
  int bank_horizon = 2048;
  double max_speed = 1.0;
  double tau_max = 0;               // 0: derived from workspace extent
  double collision_resolution = 0;  // 0: shortest obstacle edge / 100
  Seeds seeds;
  RrtConfig rrt;

  int workspace_dim() const { return workspace.dim(); }
  int state_dim() const { return 2 * workspace_dim(); }

  double effective_eta() const {
    if (eta > 0) return eta;
    return alpha >= 0.01 ? 2.0 : 10.0;
  }
  double effective_tau_max() const {
    if (tau_max > 0) return tau_max;
    double diag = (workspace.bounds.hi - workspace.bounds.lo).norm();
    return 10.0 * diag / std::max(max_speed, 1e-9);
  }
  double effective_eps_cc() const {
    if (collision_resolution > 0) return collision_resolution;
    return workspace.min_obstacle_edge() / 100.0;
  }
  double effective_r_n() const;
};

namespace detail {

inline void check_keys(const json& obj, const char* where,
                       std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ScenarioError(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

inline VectorXd parse_vector(const json& j, const char* where, int expect = -1) {
  if (!j.is_array()) throw ScenarioError(std::string(where) + ": expected an array");
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ScenarioError(std::string(where) + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  if (expect >= 0 && v.size() != expect)
    throw ScenarioError(std::string(where) + ": expected " + std::to_string(expect) +
                        " entries, got " + std::to_string(v.size()));
  return v;
}

// Accepts a scalar (times identity), a flat array (diagonal), or a full
// nested array.
inline MatrixXd parse_matrix(const json& j, const char* where, int dim) {
  if (j.is_number()) return j.get<double>() * MatrixXd::Identity(dim, dim);
  if (!j.is_array() || j.empty())
    throw ScenarioError(std::string(where) + ": expected a scalar or array");
  if (j[0].is_number()) {
    VectorXd d = parse_vector(j, where, dim);
    return d.asDiagonal();
  }
  if (static_cast<int>(j.size()) != dim)
    throw ScenarioError(std::string(where) + ": expected a " + std::to_string(dim) + "x" +
                        std::to_string(dim) + " matrix");
  MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    VectorXd row = parse_vector(j[r], where, dim);
    m.row(r) = row.transpose();
  }
  return m;
}

inline Aabb parse_aabb(const json& j, const char* where, int expect_dim = -1) {
  check_keys(j, where, {"lo", "hi"});
  if (!j.contains("lo") || !j.contains("hi"))
    throw ScenarioError(std::string(where) + ": requires lo and hi");
  Aabb b;
  b.lo = parse_vector(j["lo"], where, expect_dim);
  b.hi = parse_vector(j["hi"], where, static_cast<int>(b.lo.size()));
  for (int k = 0; k < b.dim(); ++k)
    if (b.lo[k] > b.hi[k])
      throw ScenarioError(std::string(where) + ": lo must be <= hi componentwise");
  return b;
}

}  // namespace detail

inline Scenario parse_scenario(const json& j) {
  using detail::check_keys;
  using detail::parse_aabb;
  using detail::parse_matrix;
  using detail::parse_vector;

  check_keys(j, "scenario",
             {"name", "workspace", "start", "goal", "noise", "tracking", "dt", "samples",
              "connection_radius", "alpha", "eta", "lambda", "particles", "mc_samples",
              "bank_horizon", "max_speed", "tau_max", "collision_resolution", "seeds",
              "rrt"});
  for (const char* req : {"workspace", "start", "goal", "dt", "samples", "alpha"})
    if (!j.contains(req))
      throw ScenarioError(std::string("scenario: missing required key \"") + req + "\"");

  Scenario s;
  s.name = j.value("name", "");

  const json& ws = j["workspace"];
  check_keys(ws, "workspace", {"bounds", "obstacles"});
  if (!ws.contains("bounds")) throw ScenarioError("workspace: missing bounds");
  s.workspace.bounds = parse_aabb(ws["bounds"], "workspace.bounds");
  const int dw = s.workspace.bounds.dim();
  if (ws.contains("obstacles"))
    for (const auto& o : ws["obstacles"])
      s.workspace.obstacles.push_back(parse_aabb(o, "workspace.obstacles", dw));

  const json& start = j["start"];
  check_keys(start, "start", {"position", "velocity"});
  if (!start.contains("position")) throw ScenarioError("start: missing position");
  s.x_init.position = parse_vector(start["position"], "start.position", dw);
  s.x_init.velocity = start.contains("velocity")
                          ? parse_vector(start["velocity"], "start.velocity", dw)
                          : VectorXd::Zero(dw);

  const json& goal = j["goal"];
  check_keys(goal, "goal", {"lo", "hi", "max_speed"});
  if (!goal.contains("lo") || !goal.contains("hi"))
    throw ScenarioError("goal: requires lo and hi");
  s.goal.box.lo = parse_vector(goal["lo"], "goal.lo", dw);
  s.goal.box.hi = parse_vector(goal["hi"], "goal.hi", dw);
  for (int k = 0; k < dw; ++k)
    if (s.goal.box.lo[k] > s.goal.box.hi[k])
      throw ScenarioError("goal: lo must be <= hi componentwise");
  s.goal.max_speed = goal.value("max_speed", 0.0);
  if (s.goal.max_speed < 0) throw ScenarioError("goal.max_speed: must be nonnegative");

  const int d = 2 * dw;
  s.process_noise = MatrixXd::Zero(d, d);
  s.measurement_noise = 1e-6 * MatrixXd::Identity(dw, dw);
  s.initial_covariance = MatrixXd::Zero(d, d);
  if (j.contains("noise")) {
    const json& noise = j["noise"];
    check_keys(noise, "noise", {"process", "measurement", "initial"});
    if (noise.contains("process"))
      s.process_noise = parse_matrix(noise["process"], "noise.process", d);
    if (noise.contains("measurement"))
      s.measurement_noise = parse_matrix(noise["measurement"], "noise.measurement", dw);
    if (noise.contains("initial"))
      s.initial_covariance = parse_matrix(noise["initial"], "noise.initial", d);
  }

  s.tracking.Q = MatrixXd::Identity(d, d);
  s.tracking.R = MatrixXd::Identity(dw, dw);
  s.tracking.F = MatrixXd::Identity(d, d);
  if (j.contains("tracking")) {
    const json& tr = j["tracking"];
    check_keys(tr, "tracking", {"Q", "R", "F"});
    if (tr.contains("Q")) s.tracking.Q = parse_matrix(tr["Q"], "tracking.Q", d);
    if (tr.contains("R")) s.tracking.R = parse_matrix(tr["R"], "tracking.R", dw);
    if (tr.contains("F")) s.tracking.F = parse_matrix(tr["F"], "tracking.F", d);
  }

  s.dt = j["dt"].get<double>();
  s.samples = j["samples"].get<int>();
  s.alpha = j["alpha"].get<double>();
  s.connection_radius = j.value("connection_radius", 0.0);
  s.eta = j.value("eta", 0.0);
  s.lambda = j.value("lambda", 0.5);
  s.particles = j.value("particles", 128);
  s.mc_samples = j.value("mc_samples", 10000);
  s.bank_horizon = j.value("bank_horizon", 2048);
  s.max_speed = j.value("max_speed", 1.0);
  s.tau_max = j.value("tau_max", 0.0);
  s.collision_resolution = j.value("collision_resolution", 0.0);

  if (j.contains("seeds")) {
    const json& seeds = j["seeds"];
    check_keys(seeds, "seeds", {"bank", "mc", "rrt"});
    s.seeds.bank = seeds.value("bank", std::uint64_t{1});
    s.seeds.mc = seeds.value("mc", std::uint64_t{2});
    s.seeds.rrt = seeds.value("rrt", std::uint64_t{3});
  }
  if (j.contains("rrt")) {
    const json& rrt = j["rrt"];
    check_keys(rrt, "rrt", {"trials", "max_iterations", "goal_bias"});
    s.rrt.trials = rrt.value("trials", 1000);
    s.rrt.max_iterations = rrt.value("max_iterations", 200);
    s.rrt.goal_bias = rrt.value("goal_bias", 0.05);
  }

  // validation
  if (s.dt <= 0) throw ScenarioError("dt: must be positive");
  if (s.samples < 1) throw ScenarioError("samples: must be at least 1");
  if (!(s.alpha > 0 && s.alpha < 1)) throw ScenarioError("alpha: must lie in (0, 1)");
  if (s.eta != 0 && s.eta <= 1) throw ScenarioError("eta: must be greater than 1");
  if (!(s.lambda > 0 && s.lambda <= 1)) throw ScenarioError("lambda: must lie in (0, 1]");
  if (s.particles < 1) throw ScenarioError("particles: must be at least 1");
  if (s.mc_samples < 1) throw ScenarioError("mc_samples: must be at least 1");
  if (s.max_speed <= 0) throw ScenarioError("max_speed: must be positive");
  if (!point_free(s.workspace, s.x_init.position))
    throw ScenarioError("start.position: lies in collision");
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  return parse_scenario(j);
}

inline double Scenario::effective_r_n() const {
  if (connection_radius > 0) return connection_radius;
  return suggested_connection_radius(samples, workspace_dim(), workspace, max_speed);
}

// Model assembly for the per-axis double integrator in dw workspace
// dimensions: state (p, v), input acceleration, workspace output p.
struct ModelBundle {
  ContinuousModel cm;
  DiscreteModel dm;
  GainSchedule gains;
  ClosedLoopDynamics cl;
};

inline ModelBundle build_models(const Scenario& s) {
  const int dw = s.workspace_dim();
  const int d = 2 * dw;
  ModelBundle mb;
  mb.cm.A = MatrixXd::Zero(d, d);
  mb.cm.A.topRightCorner(dw, dw) = MatrixXd::Identity(dw, dw);
  mb.cm.B = MatrixXd::Zero(d, dw);
  mb.cm.B.bottomRows(dw) = MatrixXd::Identity(dw, dw);
  mb.cm.C = MatrixXd::Zero(dw, d);
  mb.cm.C.leftCols(dw) = MatrixXd::Identity(dw, dw);
  mb.cm.V = s.process_noise;
  mb.cm.W = s.measurement_noise;
  mb.dm = discretize(mb.cm, s.dt);
  mb.gains = lqg_synthesize(mb.dm, s.tracking, s.initial_covariance);
  mb.cl = closed_loop(mb.dm, mb.gains, s.initial_covariance);
  return mb;
}

}  // namespace pump
