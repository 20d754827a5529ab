#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "pump/cp.hpp"
#include "pump/planner.hpp"
#include "pump/scenario.hpp"

namespace pump {

// Piecewise-cubic evaluation of a stored trajectory: between waypoints
// the nominal is the cubic Hermite of the endpoint states.
inline State trajectory_state_at(const Trajectory& traj, double t) {
  if (traj.points.empty()) throw std::invalid_argument("trajectory_state_at: empty");
  if (t <= traj.points.front().t) return traj.points.front().state;
  if (t >= traj.points.back().t) return traj.points.back().state;
  std::size_t j = 0;
  while (j + 2 < traj.points.size() && traj.points[j + 1].t <= t) ++j;
  const auto& a = traj.points[j];
  const auto& b = traj.points[j + 1];
  Motion seg = fixed_time_connect(a.state, b.state, b.t - a.t);
  return seg.state_at(t - a.t);
}

struct CpComparisonRow {
  std::string method;
  int waypoints = 0;
  double estimate = 0;
  double mc_reference = 0;
  double seconds = 0;
};

// Fig.-4-style estimator sweep: re-discretizes a fixed trajectory at a
// range of waypoint counts and evaluates every estimator against the MC
// reference at each resolution.
inline std::vector<CpComparisonRow> cp_compare(const Scenario& s, const Trajectory& traj,
                                               const std::vector<int>& waypoint_counts,
                                               int particles, int n_mc, int workers = 1) {
  std::vector<CpComparisonRow> rows;
  const double duration = traj.duration();
  const double eps_cc = s.effective_eps_cc();
  using clock = std::chrono::steady_clock;

  for (int count : waypoint_counts) {
    if (count < 2) throw std::invalid_argument("cp_compare: need at least 2 waypoints");
    const int T = count - 1;
    const double dt = duration / T;

    Scenario sk = s;
    sk.dt = dt;
    ModelBundle mb = build_models(sk);

    std::vector<VectorXd> positions(count);
    std::vector<ConvexRegion> regions(count);
    for (int t = 0; t <= T; ++t) {
      State st = trajectory_state_at(traj, t * dt);
      positions[t] = st.position;
      regions[t] = local_convex_region(s.workspace, st.position, st.velocity);
    }

    auto mc_start = clock::now();
    double mc_ref = mc_certify(positions, mb.cl, s.workspace, n_mc, s.seeds.mc, eps_cc,
                               workers)
                        .value;
    double mc_secs = std::chrono::duration<double>(clock::now() - mc_start).count();
    rows.push_back({"mc", count, mc_ref, mc_ref, mc_secs});

    auto covs = propagate_covariances(mb.dm, mb.gains, s.initial_covariance, T);
    std::vector<double> pointwise(count);
    auto t0 = clock::now();
    for (int t = 0; t <= T; ++t) pointwise[t] = pointwise_cp(covs[t], regions[t]);
    double pw_secs = std::chrono::duration<double>(clock::now() - t0).count();
    rows.push_back({"additive", count, additive_cp(pointwise), mc_ref, pw_secs});
    rows.push_back({"multiplicative", count, multiplicative_cp(pointwise), mc_ref, pw_secs});

    t0 = clock::now();
    std::vector<const ConvexRegion*> region_ptrs(count);
    for (int t = 0; t <= T; ++t) region_ptrs[t] = &regions[t];
    double cm = conditional_multiplicative_cp(mb.dm, mb.gains, s.initial_covariance,
                                              region_ptrs);
    rows.push_back({"conditional_multiplicative", count, cm, mc_ref,
                    std::chrono::duration<double>(clock::now() - t0).count()});

    t0 = clock::now();
    DeviationBank bank = presample_bank(mb.dm, mb.gains, s.initial_covariance, T,
                                        particles, s.seeds.bank, workers);
    std::vector<HsmcStep> steps(count);
    for (int t = 0; t <= T; ++t) steps[t] = {t, &regions[t]};
    auto [mask, cp] = hsmc_extend(ParticleMask::full(particles), bank, steps);
    rows.push_back({"hsmc", count, cp, mc_ref,
                    std::chrono::duration<double>(clock::now() - t0).count()});
  }
  return rows;
}

}  // namespace pump
