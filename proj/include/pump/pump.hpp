#pragma once

#include <chrono>
#include <vector>

#include "pump/planner.hpp"
#include "pump/scenario.hpp"

namespace pump {

// Bisection over the cp_hat-sorted goal plans per the selection phase:
// exact midpoint rule with memoized MC evaluations. sorted_ids must be in
// ascending (cp_hat, cost, insertion) order. mc(id) returns the certified
// CP of a plan. All MC evaluations are recorded so non-monotone MC along
// the sorted order is observable.
struct SelectionOutcome {
  bool success = false;
  int plan_id = -1;
  double mc = 0;
  std::vector<std::pair<int, double>> mc_evals;
};

template <typename McFn>
SelectionOutcome bisect_select(const std::vector<int>& sorted_ids, McFn&& mc, double alpha) {
  SelectionOutcome out;
  const int n = static_cast<int>(sorted_ids.size());
  if (n == 0) return out;

  std::vector<double> memo(n, -1.0);
  auto eval = [&](int m) {  // 1-based
    if (memo[m - 1] < 0) {
      memo[m - 1] = mc(sorted_ids[m - 1]);
      out.mc_evals.push_back({sorted_ids[m - 1], memo[m - 1]});
    }
    return memo[m - 1];
  };

  int l = 1, u = n;
  while (l < u) {
    int m = (l + u + 1) / 2;  // ceil
    if (eval(m) > alpha)
      u = m - 1;
    else
      l = m;
  }
  if (eval(l) > alpha) return out;
  out.success = true;
  out.plan_id = sorted_ids[l - 1];
  out.mc = memo[l - 1];
  return out;
}

// A trajectory candidate blended between the plan and the unconstrained
// optimum, with its certification.
struct SmoothResult {
  Trajectory traj;
  double cost = 0;
  double mc = 0;
  double s = 0;  // blend fraction towards the unconstrained optimum
};

namespace detail {

inline bool nominal_free(const Workspace& w, const Trajectory& traj, double eps_cc) {
  for (const auto& p : traj.points)
    if (!point_free(w, p.state.position)) return false;
  for (std::size_t j = 0; j + 1 < traj.points.size(); ++j) {
    double h = traj.points[j + 1].t - traj.points[j].t;
    if (h <= 0) continue;
    // the nominal between waypoints is the cubic Hermite of the endpoint states
    Motion seg = fixed_time_connect(traj.points[j].state, traj.points[j + 1].state, h);
    if (motion_collides(w, seg, eps_cc)) return false;
  }
  return true;
}

}  // namespace detail

// CP-constrained smoothing: bisection on the blend fraction s between the
// plan and the min-effort trajectory from x_init to the plan's end state
// over the same duration. Keeps the largest s whose blended nominal is
// collision-free and certifies MC <= alpha; s = 0 returns the plan
// unchanged.
inline SmoothResult smooth(const Trajectory& plan_traj, double plan_mc, double alpha,
                           const ClosedLoopDynamics& cl, const Workspace& w, int n_mc,
                           std::uint64_t mc_seed, double eps_cc, int workers = 1) {
  SmoothResult best;
  best.traj = plan_traj;
  best.cost = trajectory_cost(plan_traj);
  best.mc = plan_mc;
  best.s = 0;
  if (plan_traj.points.size() < 2) return best;

  const double total = plan_traj.duration();
  Motion opt = fixed_time_connect(plan_traj.points.front().state,
                                  plan_traj.points.back().state, total);

  auto blend = [&](double s) {
    Trajectory t;
    t.points.reserve(plan_traj.points.size());
    for (const auto& wp : plan_traj.points) {
      Waypoint b;
      b.t = wp.t;
      State o = opt.state_at(wp.t);
      b.state.position = (1 - s) * wp.state.position + s * o.position;
      b.state.velocity = (1 - s) * wp.state.velocity + s * o.velocity;
      b.control = (1 - s) * wp.control + s * opt.control_at(wp.t);
      t.points.push_back(std::move(b));
    }
    return t;
  };
  auto certify = [&](const Trajectory& t, double& mc_out) {
    if (!detail::nominal_free(w, t, eps_cc)) return false;
    mc_out = mc_certify(t.positions(), cl, w, n_mc, mc_seed, eps_cc, workers).value;
    return mc_out <= alpha;
  };

  auto accept = [&](double s, const Trajectory& t, double mc) {
    best.traj = t;
    best.cost = trajectory_cost(t);
    best.mc = mc;
    best.s = s;
  };

  {
    Trajectory t = blend(1.0);
    double mc;
    if (certify(t, mc)) {
      accept(1.0, t, mc);
      return best;
    }
  }
  double lo = 0, hi = 1;
  for (int it = 0; it < 10; ++it) {
    double mid = 0.5 * (lo + hi);
    Trajectory t = blend(mid);
    double mc;
    if (certify(t, mc)) {
      accept(mid, t, mc);
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return best;
}

struct PumpResult {
  bool success = false;
  Trajectory trajectory;
  double cost = 0;            // cost of the returned (smoothed) trajectory
  double certified_cp = 0;    // MC estimate of the returned trajectory
  double cp_hat = 0;          // HSMC estimate of the selected plan
  double pre_smoothing_cost = 0;
  double smoothing_s = 0;
  std::vector<int> path;      // node indices of the selected plan

  double build_graph_seconds = 0;
  double explore_seconds = 0;
  double selection_seconds = 0;
  long partial_plans = 0;
  std::string termination;
  std::vector<std::pair<double, double>> pareto;  // (cost, cp_hat) of goal plans
  std::vector<std::pair<int, double>> mc_evals;
};

// Full pipeline: graph building, Pareto exploration, bisection selection
// with MC certification, and CP-constrained smoothing. A prebuilt graph
// may be supplied to reuse sampling/steering work across runs.
inline PumpResult run_pump(const Scenario& s, int workers = 1,
                           const SampleGraph* prebuilt = nullptr) {
  using clock = std::chrono::steady_clock;
  auto secs = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  PumpResult res;
  ModelBundle mb = build_models(s);
  const double eps_cc = s.effective_eps_cc();
  const double r_n = s.effective_r_n();

  auto t0 = clock::now();
  SampleGraph local_graph;
  const SampleGraph* graph = prebuilt;
  if (!graph) {
    std::vector<State> nodes;
    nodes.push_back(s.x_init);
    auto samples = sample_free(s.samples, s.workspace, s.max_speed, s.goal);
    for (auto& st : samples) nodes.push_back(std::move(st));
    local_graph = build_graph(std::move(nodes), s.workspace, s.goal, r_n, s.dt, eps_cc,
                              s.effective_tau_max(), workers);
    graph = &local_graph;
  }
  auto t1 = clock::now();
  res.build_graph_seconds = secs(t0, t1);

  DeviationBank bank = presample_bank(mb.dm, mb.gains, s.initial_covariance,
                                      s.bank_horizon, s.particles, s.seeds.bank, workers);
  ExploreParams ep;
  double eta = s.effective_eta();
  ep.alpha_min = s.alpha / eta;
  ep.alpha_max = std::min(1.0, eta * s.alpha);
  ep.lambda = s.lambda;
  ep.r_n = r_n;
  ep.workers = workers;
  ExploreResult ex = explore(*graph, bank, ep);
  auto t2 = clock::now();
  res.explore_seconds = secs(t1, t2);
  res.partial_plans = ex.stats.partial_plans;
  res.termination = ex.stats.termination;

  // goal plans live at several goal nodes, so the union of their per-node
  // Pareto sets is not itself a front; reduce it to the global front over
  // the goal region (ascending cost, strictly descending cp_hat) so that
  // the bisection's premise -- cost trades off against cp_hat -- holds
  std::vector<int> sorted = ex.goal_plans;
  std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
    const PlanRec& pa = ex.plans[a];
    const PlanRec& pb = ex.plans[b];
    if (pa.cost != pb.cost) return pa.cost < pb.cost;
    if (pa.cp_hat != pb.cp_hat) return pa.cp_hat < pb.cp_hat;
    return a < b;
  });
  std::vector<int> front;
  double min_cp = std::numeric_limits<double>::infinity();
  for (int id : sorted) {
    if (ex.plans[id].cp_hat < min_cp) {
      front.push_back(id);
      min_cp = ex.plans[id].cp_hat;
    }
  }
  for (int id : front) res.pareto.push_back({ex.plans[id].cost, ex.plans[id].cp_hat});

  // ascending cp_hat for the bisection (equals descending cost on a front)
  sorted.assign(front.rbegin(), front.rend());

  auto mc_of = [&](int id) {
    Trajectory t = path_trajectory(*graph, plan_path(ex, id), s.dt);
    return mc_certify(t.positions(), mb.cl, s.workspace, s.mc_samples, s.seeds.mc, eps_cc,
                      workers)
        .value;
  };
  SelectionOutcome sel = bisect_select(sorted, mc_of, s.alpha);
  res.mc_evals = sel.mc_evals;
  if (!sel.success) {
    res.selection_seconds = secs(t2, clock::now());
    return res;
  }

  res.path = plan_path(ex, sel.plan_id);
  res.cp_hat = ex.plans[sel.plan_id].cp_hat;
  Trajectory plan_traj = path_trajectory(*graph, res.path, s.dt);
  res.pre_smoothing_cost = ex.plans[sel.plan_id].cost;
  SmoothResult sm = smooth(plan_traj, sel.mc, s.alpha, mb.cl, s.workspace, s.mc_samples,
                           s.seeds.mc, eps_cc, workers);
  res.trajectory = std::move(sm.traj);
  res.cost = sm.cost;
  res.certified_cp = sm.mc;
  res.smoothing_s = sm.s;
  res.success = true;
  res.selection_seconds = secs(t2, clock::now());
  return res;
}

}  // namespace pump
