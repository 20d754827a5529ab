#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

#include "pump/compare.hpp"
#include "pump/pump.hpp"
#include "pump/rrt.hpp"
#include "pump/scenario.hpp"

namespace pump {

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

inline json vector_json(const VectorXd& v) {
  json a = json::array();
  for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

}  // namespace detail

inline json trajectory_json(const Trajectory& traj) {
  json points = json::array();
  for (const auto& p : traj.points) {
    points.push_back({{"t", p.t},
                      {"position", detail::vector_json(p.state.position)},
                      {"velocity", detail::vector_json(p.state.velocity)},
                      {"control", detail::vector_json(p.control)}});
  }
  return {{"schema_version", 1}, {"points", points}};
}

inline Trajectory parse_trajectory(const json& j) {
  if (!j.contains("points") || !j["points"].is_array())
    throw std::runtime_error("trajectory: missing points array");
  Trajectory traj;
  for (const auto& p : j["points"]) {
    Waypoint wp;
    wp.t = p.at("t").get<double>();
    wp.state.position = detail::parse_vector(p.at("position"), "trajectory.position");
    wp.state.velocity = detail::parse_vector(p.at("velocity"), "trajectory.velocity",
                                             static_cast<int>(wp.state.position.size()));
    wp.control = p.contains("control")
                     ? detail::parse_vector(p.at("control"), "trajectory.control",
                                            static_cast<int>(wp.state.position.size()))
                     : VectorXd::Zero(wp.state.position.size());
    traj.points.push_back(std::move(wp));
  }
  for (std::size_t i = 1; i < traj.points.size(); ++i)
    if (traj.points[i].t <= traj.points[i - 1].t)
      throw std::runtime_error("trajectory: times must be strictly increasing");
  return traj;
}

inline Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
  json j;
  in >> j;
  return parse_trajectory(j);
}

inline json plan_report_json(const Scenario& s, const PumpResult& r, int workers) {
  json pareto = json::array();
  for (const auto& [cost, cp] : r.pareto) pareto.push_back({{"cost", cost}, {"cp_hat", cp}});
  json evals = json::array();
  for (const auto& [id, mc] : r.mc_evals) evals.push_back({{"plan", id}, {"mc", mc}});
  return {{"schema_version", 1},
          {"scenario", s.name},
          {"algorithm", "pump"},
          {"workers", workers},
          {"success", r.success},
          {"cost", r.cost},
          {"pre_smoothing_cost", r.pre_smoothing_cost},
          {"certified_cp", r.certified_cp},
          {"cp_hat", r.cp_hat},
          {"alpha", s.alpha},
          {"smoothing_s", r.smoothing_s},
          {"path", r.path},
          {"partial_plans", r.partial_plans},
          {"termination", r.termination},
          {"goal_plans", pareto},
          {"mc_evaluations", evals},
          {"timing",
           {{"build_graph_seconds", r.build_graph_seconds},
            {"explore_seconds", r.explore_seconds},
            {"selection_seconds", r.selection_seconds}}}};
}

inline json rrt_report_json(const Scenario& s, const RrtResult& r, int trials, int workers) {
  return {{"schema_version", 1},
          {"scenario", s.name},
          {"algorithm", "rrt"},
          {"workers", workers},
          {"success", r.success},
          {"cost", r.cost},
          {"certified_cp", r.certified_cp},
          {"alpha", s.alpha},
          {"trials", trials},
          {"trials_reaching_goal", r.trials_reaching_goal},
          {"certification_attempts", r.certification_attempts}};
}

inline std::string pareto_csv(const PumpResult& r) {
  std::string out = "cost,cp_hat\n";
  for (const auto& [cost, cp] : r.pareto) {
    json row = {cost, cp};  // JSON double formatting for exact round-trip
    out += row[0].dump() + "," + row[1].dump() + "\n";
  }
  return out;
}

inline std::string cp_compare_csv(const std::vector<CpComparisonRow>& rows) {
  std::string out = "method,waypoints,estimate,mc_reference,wall_time\n";
  for (const auto& r : rows) {
    out += r.method + "," + std::to_string(r.waypoints) + "," + json(r.estimate).dump() +
           "," + json(r.mc_reference).dump() + "," + json(r.seconds).dump() + "\n";
  }
  return out;
}

}  // namespace pump
