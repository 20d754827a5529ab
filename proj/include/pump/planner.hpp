#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "pump/cp.hpp"
#include "pump/graph.hpp"
#include "pump/parallel.hpp"

namespace pump {

// Partial motion plan. Paths are persistent: each record stores only its
// head and a reference to the parent plan, so plans share tails.
struct PlanRec {
  int head = 0;
  int parent = -1;  // index into the plan arena, -1 for the root
  double cost = 0;
  double cp_hat = 0;
  int t_end = 0;  // global timestep index at the head
  ParticleMask mask;
};

struct ExploreParams {
  double alpha_min = 0;
  double alpha_max = 1;
  double lambda = 0.5;
  double r_n = 1;
  int workers = 1;
};

struct ExploreStats {
  long partial_plans = 0;  // extension candidates evaluated
  int rounds = 0;
  long discarded_cp = 0;
  long removed_dominated = 0;
  long discarded_horizon = 0;
  std::string termination;
};

struct ExploreResult {
  std::deque<PlanRec> plans;
  std::vector<std::vector<int>> pareto;  // per-sample plan sets P(v)
  std::vector<int> goal_plans;
  ExploreStats stats;
};

// Observer invoked after each exploration round; used by property tests.
using RoundHook = std::function<void(int round, const ExploreResult& state,
                                     const std::vector<int>& expanded)>;

namespace detail {

// p_dom dominates p iff p.cost is strictly greater and p.cp_hat at least
// as large. Ties in both fields keep both plans.
inline bool dominates(double dom_cost, double dom_cp, double cost, double cp) {
  return cost > dom_cost && cp >= dom_cp;
}

}  // namespace detail

// Cost-bucketed Pareto exploration. Rounds expand every open plan below
// an increasing cost threshold i * lambda * r_n; extensions with
// cp_hat >= alpha_max are discarded and per-sample Pareto sets pruned of
// dominated plans (in both directions). Once a goal-headed plan with
// cp_hat < alpha_min exists, the search continues only while some
// unexpanded plan is still cheaper than it; since edge costs are
// strictly positive no such plan can be beaten afterwards, so the best
// returned goal cost is exactly the constrained optimum over the graph.
// The result is a pure function of (graph, bank, params), independent of
// the worker count.
inline ExploreResult explore(const SampleGraph& g, const DeviationBank& bank,
                             const ExploreParams& params,
                             const RoundHook& hook = nullptr) {
  ExploreResult res;
  const int n = static_cast<int>(g.nodes.size());
  res.pareto.assign(n, {});
  std::vector<char> is_goal(n, 0);
  for (int v : g.goal_nodes) is_goal[v] = 1;

  const double bucket_width = params.lambda * params.r_n;
  std::vector<std::vector<int>> buckets;
  auto bucket_of = [&](double cost) {
    return static_cast<int>(std::ceil(cost / bucket_width - 1e-12));
  };
  auto push_open = [&](int id, double cost) {
    int b = std::max(0, bucket_of(cost));
    if (b >= static_cast<int>(buckets.size())) buckets.resize(b + 1);
    buckets[b].push_back(id);
  };

  double best_goal = std::numeric_limits<double>::infinity();
  auto note_goal = [&](const PlanRec& p) {
    if (is_goal[p.head] && p.cp_hat < params.alpha_min)
      best_goal = std::min(best_goal, p.cost);
  };

  res.plans.push_back({0, -1, 0.0, 0.0, 0, ParticleMask::full(bank.n_particles)});
  res.pareto[0].push_back(0);
  push_open(0, 0.0);
  note_goal(res.plans[0]);

  struct Candidate {
    int source;
    int head;
    double cost;
    double cp;
    int t_end;
    ParticleMask mask;
    bool keep;
  };

  std::vector<int> group;  // B: plans considered for expansion this round
  std::vector<char> is_open = {0};  // root collected into the first group below
  long open_count = 1;
  int i = 0;
  group.push_back(0);
  buckets[0].clear();

  while (true) {
    // a qualifying goal plan is final once no unexpanded plan is cheaper:
    // group members are the cheapest open plans, and edge costs are
    // strictly positive
    if (!group.empty() && !std::isinf(best_goal)) {
      double min_group = std::numeric_limits<double>::infinity();
      for (int id : group) min_group = std::min(min_group, res.plans[id].cost);
      if (best_goal <= min_group) {
        res.stats.termination = "goal_below_alpha_min";
        break;
      }
    }
    if (group.empty() && open_count == 0) {
      res.stats.termination =
          std::isinf(best_goal) ? "frontier_exhausted" : "goal_below_alpha_min";
      break;
    }

    if (!group.empty()) {
      res.stats.rounds++;
      // one task per (plan in B, outgoing edge), evaluated in parallel
      struct Task {
        int plan;
        int edge;
      };
      std::vector<Task> tasks;
      for (int id : group)
        for (std::size_t e = 0; e < g.adj[res.plans[id].head].size(); ++e)
          tasks.push_back({id, static_cast<int>(e)});
      res.stats.partial_plans += static_cast<long>(tasks.size());

      std::vector<Candidate> cands(tasks.size());
      parallel_for(tasks.size(), params.workers, [&](std::size_t lo, std::size_t hi) {
        std::vector<HsmcStep> steps;
        for (std::size_t ti = lo; ti < hi; ++ti) {
          const PlanRec& p = res.plans[tasks[ti].plan];
          const Edge& edge = g.adj[p.head][tasks[ti].edge];
          Candidate& c = cands[ti];
          c.source = tasks[ti].plan;
          c.head = edge.to;
          c.cost = p.cost + edge.motion.cost;
          c.t_end = p.t_end + edge.n_steps;
          if (c.t_end > bank.horizon) {
            c.keep = false;
            c.cp = 2.0;  // sentinel: horizon overflow
            continue;
          }
          steps.clear();
          for (int j = 0; j < edge.n_steps; ++j)
            steps.push_back({p.t_end + j + 1, &edge.regions[j]});
          auto [mask, cp] = hsmc_extend(p.mask, bank, steps);
          c.mask = std::move(mask);
          c.cp = cp;
          c.keep = cp < params.alpha_max;
        }
      });

      // deterministic merge in task order
      const int first_fresh = static_cast<int>(res.plans.size());
      std::vector<int> fresh;  // arena ids of surviving newcomers
      for (auto& c : cands) {
        if (!c.keep) {
          if (c.cp > 1.5)
            res.stats.discarded_horizon++;
          else
            res.stats.discarded_cp++;
          continue;
        }
        int id = static_cast<int>(res.plans.size());
        res.plans.push_back({c.head, c.source, c.cost, c.cp, c.t_end, std::move(c.mask)});
        res.pareto[c.head].push_back(id);
        is_open.push_back(0);
        fresh.push_back(id);
        note_goal(res.plans[id]);
      }

      // RemoveDominated: drop newcomers dominated by any plan (new or
      // old) at the same head
      std::vector<char> drop(fresh.size(), 0);
      for (std::size_t fi = 0; fi < fresh.size(); ++fi) {
        const PlanRec& q = res.plans[fresh[fi]];
        for (int other : res.pareto[q.head]) {
          if (other == fresh[fi]) continue;
          const PlanRec& p = res.plans[other];
          if (detail::dominates(p.cost, p.cp_hat, q.cost, q.cp_hat)) {
            drop[fi] = 1;
            break;
          }
        }
      }
      for (std::size_t fi = 0; fi < fresh.size(); ++fi) {
        if (drop[fi]) {
          auto& set = res.pareto[res.plans[fresh[fi]].head];
          set.erase(std::find(set.begin(), set.end(), fresh[fi]));
          res.stats.removed_dominated++;
          continue;
        }
        // RemoveDominated, other direction: evict previously kept plans
        // at the same head that this surviving newcomer dominates; evicted
        // plans still waiting in a bucket are skipped at collection time
        const PlanRec& q = res.plans[fresh[fi]];
        auto& set = res.pareto[q.head];
        for (std::size_t k = 0; k < set.size();) {
          int other = set[k];
          const PlanRec& p = res.plans[other];
          if (other < first_fresh && other != 0 &&
              detail::dominates(q.cost, q.cp_hat, p.cost, p.cp_hat)) {
            if (is_open[other]) {
              is_open[other] = 0;
              open_count--;
            }
            set.erase(set.begin() + k);
            res.stats.removed_dominated++;
          } else {
            ++k;
          }
        }
        push_open(fresh[fi], res.plans[fresh[fi]].cost);
        is_open[fresh[fi]] = 1;
        open_count++;
      }
      open_count -= static_cast<long>(group.size());

      if (hook) hook(res.stats.rounds, res, group);
    }

    // advance the cost threshold and collect the next expansion group,
    // skipping plans evicted by dominance while waiting
    i++;
    group.clear();
    int limit = std::min(i, static_cast<int>(buckets.size()) - 1);
    for (int b = 0; b <= limit; ++b) {
      for (int id : buckets[b]) {
        if (!is_open[id]) continue;
        is_open[id] = 0;
        group.push_back(id);
      }
      buckets[b].clear();
    }
    if (group.empty() && open_count > 0) continue;  // threshold below all open plans
  }

  for (int v : g.goal_nodes)
    for (int id : res.pareto[v]) res.goal_plans.push_back(id);
  return res;
}

// Node sequence of a plan, root first.
inline std::vector<int> plan_path(const ExploreResult& res, int plan_id) {
  std::vector<int> path;
  for (int id = plan_id; id != -1; id = res.plans[id].parent)
    path.push_back(res.plans[id].head);
  std::reverse(path.begin(), path.end());
  return path;
}

struct Trajectory {
  std::vector<Waypoint> points;  // absolute times, nominal states and controls

  double duration() const { return points.empty() ? 0 : points.back().t; }

  std::vector<VectorXd> positions() const {
    std::vector<VectorXd> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.state.position);
    return out;
  }
};

// Concatenated nominal waypoints along a node path.
inline Trajectory path_trajectory(const SampleGraph& g, const std::vector<int>& path,
                                  double dt) {
  Trajectory traj;
  double offset = 0;
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const Edge* edge = nullptr;
    for (const auto& e : g.adj[path[j]])
      if (e.to == path[j + 1]) {
        edge = &e;
        break;
      }
    if (!edge) throw std::logic_error("path_trajectory: missing edge");
    auto wps = motion_waypoints(edge->motion, dt);
    for (std::size_t k = (j == 0 ? 0 : 1); k < wps.size(); ++k) {
      Waypoint wp = wps[k];
      wp.t += offset;
      traj.points.push_back(std::move(wp));
    }
    offset += edge->motion.tau;
  }
  if (path.size() == 1)
    traj.points.push_back({0.0, g.nodes[path[0]], VectorXd::Zero(g.nodes[path[0]].dim())});
  return traj;
}

// Mixed time / control-effort cost of a trajectory. Controls are linear
// within an interval, so per-interval Simpson is exact.
inline double trajectory_cost(const Trajectory& traj) {
  double c = traj.duration();
  for (std::size_t j = 0; j + 1 < traj.points.size(); ++j) {
    const auto& w0 = traj.points[j];
    const auto& w1 = traj.points[j + 1];
    double h = w1.t - w0.t;
    VectorXd um = 0.5 * (w0.control + w1.control);
    c += h / 6.0 *
         (w0.control.squaredNorm() + 4.0 * um.squaredNorm() + w1.control.squaredNorm());
  }
  return c;
}

}  // namespace pump
