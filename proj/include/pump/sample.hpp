#pragma once

#include <stdexcept>
#include <vector>

#include "pump/geom.hpp"
#include "pump/steer.hpp"

namespace pump {

// Radical-inverse Halton value for a 1-based index.
inline double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

struct GoalRegion {
  Aabb box;          // position box
  double max_speed;  // velocity-norm cap

  bool contains(const State& s) const {
    return box.contains(s.position) && s.velocity.norm() <= max_speed;
  }
};

namespace detail {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

inline State halton_state(std::uint64_t index, const Aabb& pos_bounds, double max_speed,
                          int dim_offset = 0) {
  const int dw = pos_bounds.dim();
  State s;
  s.position.resize(dw);
  s.velocity.resize(dw);
  for (int k = 0; k < dw; ++k) {
    double u = halton(index, kPrimes[dim_offset + k]);
    s.position[k] = pos_bounds.lo[k] + u * (pos_bounds.hi[k] - pos_bounds.lo[k]);
    double v = halton(index, kPrimes[dim_offset + dw + k]);
    s.velocity[k] = -max_speed + v * 2 * max_speed;
  }
  return s;
}

}  // namespace detail

// Deterministic low-dispersion sampling of the free state space: the
// first 2*dw Halton dimensions scaled to the position/velocity bounds,
// colliding positions discarded. Appends one goal-region sample when the
// sequence produced none.
inline std::vector<State> sample_free(int n, const Workspace& w, double max_speed,
                                      const GoalRegion& goal) {
  if (n < 1) throw std::invalid_argument("sample_free: n must be at least 1");
  std::vector<State> out;
  out.reserve(n + 1);
  bool have_goal = false;
  std::uint64_t index = 1;
  while (static_cast<int>(out.size()) < n) {
    State s = detail::halton_state(index++, w.bounds, max_speed);
    if (!point_free(w, s.position)) continue;
    have_goal = have_goal || goal.contains(s);
    out.push_back(std::move(s));
  }
  if (!have_goal) {
    State center;
    center.position = 0.5 * (goal.box.lo + goal.box.hi);
    center.velocity = VectorXd::Zero(w.dim());
    if (point_free(w, center.position)) {
      out.push_back(std::move(center));
    } else {
      bool placed = false;
      for (std::uint64_t gi = 1; gi <= 100000 && !placed; ++gi) {
        State s = detail::halton_state(gi, goal.box, goal.max_speed);
        if (s.velocity.norm() > goal.max_speed) continue;
        if (!point_free(w, s.position)) continue;
        out.push_back(std::move(s));
        placed = true;
      }
      if (!placed)
        throw std::runtime_error("sample_free: goal region appears entirely in collision");
    }
  }
  return out;
}

}  // namespace pump
