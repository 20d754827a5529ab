// Command-line front end: scenario ingestion, run orchestration, and
// report emission for planner runs, estimator comparisons, baseline
// head-to-heads, and trajectory certification.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "pump/report.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitInputError = 1;    // bad scenario / trajectory / arguments
constexpr int kExitPlannerFailure = 2;  // run finished but found no certified plan

struct CommonOpts {
  std::string scenario_path;
  std::uint64_t seed = 0;  // 0: keep the scenario's seeds
  int workers = 1;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scenario", o.scenario_path, "Scenario JSON file")->required();
  cmd->add_option("--seed", o.seed, "Override the scenario seed group (bank/mc/rrt)");
  cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out_dir, "Output directory (created if absent)");
}

pump::Scenario load(const CommonOpts& o) {
  pump::Scenario s = pump::load_scenario(o.scenario_path);
  if (o.seed != 0) {
    s.seeds.bank = o.seed;
    s.seeds.mc = o.seed + 1;
    s.seeds.rrt = o.seed + 2;
  }
  return s;
}

std::string out_path(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / name).string();
}

int run_plan(const CommonOpts& o) {
  pump::Scenario s = load(o);
  pump::PumpResult r = pump::run_pump(s, o.workers);
  pump::json report = pump::plan_report_json(s, r, o.workers);
  pump::detail::write_text(out_path(o, "report.json"), report.dump(2) + "\n");
  pump::detail::write_text(out_path(o, "pareto.csv"), pump::pareto_csv(r));
  if (r.success)
    pump::detail::write_text(out_path(o, "trajectory.json"),
                             pump::trajectory_json(r.trajectory).dump(2) + "\n");
  std::printf("%s cost=%.6f certified_cp=%.6f alpha=%g partial_plans=%ld\n",
              r.success ? "success" : "failure", r.cost, r.certified_cp, s.alpha,
              r.partial_plans);
  return r.success ? kExitSuccess : kExitPlannerFailure;
}

int run_rrt(const CommonOpts& o) {
  pump::Scenario s = load(o);
  pump::RrtResult r = pump::repeated_rrt(s, s.rrt.trials, s.alpha, s.mc_samples, o.workers);
  pump::json report = pump::rrt_report_json(s, r, s.rrt.trials, o.workers);
  pump::detail::write_text(out_path(o, "report.json"), report.dump(2) + "\n");
  if (r.success)
    pump::detail::write_text(out_path(o, "trajectory.json"),
                             pump::trajectory_json(r.trajectory).dump(2) + "\n");
  std::printf("%s cost=%.6f certified_cp=%.6f trials_reaching_goal=%d\n",
              r.success ? "success" : "failure", r.cost, r.certified_cp,
              r.trials_reaching_goal);
  return r.success ? kExitSuccess : kExitPlannerFailure;
}

int run_cp_compare(const CommonOpts& o, const std::string& traj_path,
                   std::vector<int> waypoints, int n_mc) {
  pump::Scenario s = load(o);
  pump::Trajectory traj = pump::load_trajectory(traj_path);
  if (waypoints.empty()) waypoints = {25, 50, 100, 200};
  auto rows = pump::cp_compare(s, traj, waypoints, s.particles, n_mc > 0 ? n_mc : s.mc_samples,
                               o.workers);
  pump::detail::write_text(out_path(o, "cp_compare.csv"), pump::cp_compare_csv(rows));
  for (const auto& r : rows)
    std::printf("%-28s waypoints=%-4d estimate=%.6f mc=%.6f %.3fs\n", r.method.c_str(),
                r.waypoints, r.estimate, r.mc_reference, r.seconds);
  return kExitSuccess;
}

int run_certify(const CommonOpts& o, const std::string& traj_path) {
  pump::Scenario s = load(o);
  pump::Trajectory traj = pump::load_trajectory(traj_path);
  pump::ModelBundle mb = pump::build_models(s);
  pump::CpEstimate est =
      pump::mc_certify(traj.positions(), mb.cl, s.workspace, s.mc_samples, s.seeds.mc,
                       s.effective_eps_cc(), o.workers);
  pump::json report = {{"schema_version", 1},
                       {"scenario", s.name},
                       {"algorithm", "certify"},
                       {"certified_cp", est.value},
                       {"mc_samples", est.samples},
                       {"alpha", s.alpha},
                       {"within_alpha", est.value <= s.alpha}};
  pump::detail::write_text(out_path(o, "report.json"), report.dump(2) + "\n");
  std::printf("certified_cp=%.6f mc_samples=%d alpha=%g %s\n", est.value, est.samples,
              s.alpha, est.value <= s.alpha ? "within_alpha" : "exceeds_alpha");
  return est.value <= s.alpha ? kExitSuccess : kExitPlannerFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chance-constrained kinodynamic motion planner"};
  app.require_subcommand(1);

  CommonOpts plan_o, rrt_o, cmp_o, cert_o;
  std::string cmp_traj, cert_traj;
  std::vector<int> cmp_waypoints;
  int cmp_mc = 0;

  CLI::App* plan = app.add_subcommand("plan", "Plan with the parallel Pareto planner");
  add_common(plan, plan_o);

  CLI::App* rrt = app.add_subcommand("rrt", "Repeated goal-biased RRT baseline");
  add_common(rrt, rrt_o);

  CLI::App* cmp = app.add_subcommand(
      "cp-compare", "Compare CP estimators on a trajectory across waypoint counts");
  add_common(cmp, cmp_o);
  cmp->add_option("--trajectory", cmp_traj, "Trajectory JSON file")->required();
  cmp->add_option("--waypoints", cmp_waypoints, "Waypoint counts (default 25 50 100 200)");
  cmp->add_option("--mc-samples", cmp_mc, "MC reference sample count");

  CLI::App* cert = app.add_subcommand("certify", "Monte Carlo CP of a trajectory");
  add_common(cert, cert_o);
  cert->add_option("--trajectory", cert_traj, "Trajectory JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return run_plan(plan_o);
    if (rrt->parsed()) return run_rrt(rrt_o);
    if (cmp->parsed()) return run_cp_compare(cmp_o, cmp_traj, cmp_waypoints, cmp_mc);
    if (cert->parsed()) return run_certify(cert_o, cert_traj);
  } catch (const pump::ScenarioError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
  return kExitInputError;
}
