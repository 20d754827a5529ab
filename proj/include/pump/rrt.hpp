#pragma once

#include <vector>

#include "pump/cp.hpp"
#include "pump/planner.hpp"
#include "pump/scenario.hpp"

namespace pump {

struct RrtResult {
  bool success = false;
  Trajectory trajectory;
  double cost = 0;
  double certified_cp = 0;
  int trials_reaching_goal = 0;
  int certification_attempts = 0;
};

namespace detail {

struct RrtNode {
  State state;
  int parent = -1;
  Motion incoming;  // motion from parent
};

inline State rrt_sample(const Scenario& s, std::uint64_t seed, std::uint64_t trial,
                        std::uint64_t iter) {
  const int dw = s.workspace_dim();
  State st;
  st.position.resize(dw);
  st.velocity.resize(dw);
  double bias = rng::uniform(seed, trial, iter, 0);
  const Aabb& box = bias < s.rrt.goal_bias ? s.goal.box : s.workspace.bounds;
  double vmax = bias < s.rrt.goal_bias ? s.goal.max_speed : s.max_speed;
  for (int k = 0; k < dw; ++k) {
    double u = rng::uniform(seed, trial, iter, 1 + k);
    st.position[k] = box.lo[k] + u * (box.hi[k] - box.lo[k]);
    double v = rng::uniform(seed, trial, iter, 1 + dw + k);
    st.velocity[k] = -vmax + v * 2 * vmax;
  }
  return st;
}

}  // namespace detail

// Goal-biased kinodynamic RRT baseline: repeated independent trials, each
// growing a tree with cost-truncated optimal steering; among trials that
// reach the goal the lowest-cost trajectory certifying MC <= alpha wins.
inline RrtResult repeated_rrt(const Scenario& s, int trials, double alpha, int n_mc,
                              int workers = 1) {
  if (trials < 1) throw std::invalid_argument("repeated_rrt: trials must be at least 1");
  ModelBundle mb = build_models(s);
  const double eps_cc = s.effective_eps_cc();
  const double r_n = s.effective_r_n();
  const double tau_max = s.effective_tau_max();

  struct TrialOutcome {
    bool reached = false;
    Trajectory traj;
    double cost = 0;
  };
  std::vector<TrialOutcome> outcomes(trials);

  parallel_for(trials, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t trial = lo; trial < hi; ++trial) {
      std::vector<detail::RrtNode> tree;
      tree.push_back({s.x_init, -1, {}});
      for (int iter = 0; iter < s.rrt.max_iterations; ++iter) {
        State target = detail::rrt_sample(s, s.seeds.rrt, trial, iter);
        if (!point_free(s.workspace, target.position)) continue;

        // standard RRT nearest-neighbor rule: weighted Euclidean state
        // distance, then optimal steering from that single node
        int nearest = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int ni = 0; ni < static_cast<int>(tree.size()); ++ni) {
          double dist = (tree[ni].state.position - target.position).squaredNorm() +
                        (tree[ni].state.velocity - target.velocity).squaredNorm();
          if (dist < best_d) {
            best_d = dist;
            nearest = ni;
          }
        }
        Motion toward = connect(tree[nearest].state, target, tau_max);
        if (!toward.ok || toward.tau <= 0) continue;

        Motion step = truncate_motion(toward, r_n);
        if (step.tau <= 0) continue;
        if (motion_collides(s.workspace, step, eps_cc)) continue;
        tree.push_back({step.to, nearest, std::move(step)});

        if (s.goal.contains(tree.back().state)) {
          // assemble the trajectory root-to-goal
          std::vector<int> chain;
          for (int id = static_cast<int>(tree.size()) - 1; id != -1; id = tree[id].parent)
            chain.push_back(id);
          std::reverse(chain.begin(), chain.end());
          Trajectory traj;
          double offset = 0;
          for (std::size_t j = 0; j < chain.size(); ++j) {
            if (j == 0) {
              traj.points.push_back(
                  {0.0, tree[chain[0]].state, VectorXd::Zero(s.workspace_dim())});
              continue;
            }
            auto wps = motion_waypoints(tree[chain[j]].incoming, s.dt);
            for (std::size_t k = 1; k < wps.size(); ++k) {
              Waypoint wp = wps[k];
              wp.t += offset;
              traj.points.push_back(std::move(wp));
            }
            offset += tree[chain[j]].incoming.tau;
          }
          outcomes[trial].reached = true;
          outcomes[trial].cost = trajectory_cost(traj);
          outcomes[trial].traj = std::move(traj);
          break;
        }
      }
    }
  });

  RrtResult res;
  std::vector<int> reached;
  for (int t = 0; t < trials; ++t)
    if (outcomes[t].reached) reached.push_back(t);
  res.trials_reaching_goal = static_cast<int>(reached.size());
  std::stable_sort(reached.begin(), reached.end(), [&](int a, int b) {
    return outcomes[a].cost < outcomes[b].cost;
  });
  for (int t : reached) {
    res.certification_attempts++;
    double mc = mc_certify(outcomes[t].traj.positions(), mb.cl, s.workspace, n_mc,
                           s.seeds.mc, eps_cc, workers)
                    .value;
    if (mc <= alpha) {
      res.success = true;
      res.trajectory = std::move(outcomes[t].traj);
      res.cost = outcomes[t].cost;
      res.certified_cp = mc;
      break;
    }
  }
  return res;
}

}  // namespace pump
