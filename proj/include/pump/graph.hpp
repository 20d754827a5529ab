#pragma once

#include <cmath>
#include <vector>

#include "pump/cp.hpp"
#include "pump/geom.hpp"
#include "pump/parallel.hpp"
#include "pump/sample.hpp"
#include "pump/steer.hpp"

namespace pump {

// Directed, collision-free, cost-bounded connection to a neighbor sample.
// Regions are precomputed per waypoint (excluding the edge's first
// waypoint, which coincides with the source sample) with half-spaces
// projected by the edge's nominal velocity.
struct Edge {
  int to = -1;
  Motion motion;
  int n_steps = 0;  // global timesteps this edge adds to a plan
  std::vector<ConvexRegion> regions;
};

struct SampleGraph {
  std::vector<State> nodes;  // index 0 is x_init
  std::vector<std::vector<Edge>> adj;
  std::vector<int> goal_nodes;
  double r_n = 0;
  double dt = 0;

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (const auto& a : adj) c += a.size();
    return c;
  }
};

// Connection-radius suggestion scaled from the sample count and the
// workspace extent; callers normally pass an explicit r_n instead.
inline double suggested_connection_radius(int n, int dw, const Workspace& w,
                                          double max_speed) {
  double diag = (w.bounds.hi - w.bounds.lo).norm();
  double travel = diag / std::max(max_speed, 1e-9);
  double frac = std::pow(std::log(static_cast<double>(n) + 1.0) / (n + 1.0),
                         1.0 / (2.0 * dw));
  return 4.0 * travel * frac;
}

inline SampleGraph build_graph(std::vector<State> nodes, const Workspace& w,
                               const GoalRegion& goal, double r_n, double dt,
                               double eps_cc, double tau_max, int workers = 1) {
  if (r_n <= 0) throw std::invalid_argument("build_graph: r_n must be positive");
  SampleGraph g;
  g.nodes = std::move(nodes);
  g.r_n = r_n;
  g.dt = dt;
  const int n = static_cast<int>(g.nodes.size());
  g.adj.resize(n);
  for (int i = 0; i < n; ++i)
    if (goal.contains(g.nodes[i])) g.goal_nodes.push_back(i);

  parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v) {
      const State& a = g.nodes[v];
      for (int u = 0; u < n; ++u) {
        if (u == static_cast<int>(v)) continue;
        const State& b = g.nodes[u];
        // cheap lower bound: cost >= 2 |dv|
        if (2.0 * (b.velocity - a.velocity).norm() >= r_n) continue;
        Motion m = connect(a, b, tau_max);
        if (!m.ok || m.cost >= r_n || m.tau <= 0) continue;
        if (motion_collides(w, m, eps_cc)) continue;
        auto wps = motion_waypoints(m, dt);
        Edge e;
        e.to = u;
        e.n_steps = static_cast<int>(wps.size()) - 1;
        e.regions.reserve(e.n_steps);
        bool valid = true;
        for (std::size_t j = 1; j < wps.size(); ++j) {
          if (!point_free(w, wps[j].state.position)) {
            valid = false;  // waypoint grazes an obstacle the sampled check missed
            break;
          }
          e.regions.push_back(
              local_convex_region(w, wps[j].state.position, wps[j].state.velocity));
        }
        if (!valid) continue;
        e.motion = std::move(m);
        g.adj[v].push_back(std::move(e));
      }
    }
  });
  return g;
}

}  // namespace pump
