#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pump {

using Eigen::VectorXd;

struct State {
  VectorXd position;
  VectorXd velocity;

  int dim() const { return static_cast<int>(position.size()); }

  static State make(std::initializer_list<double> p, std::initializer_list<double> v) {
    State s;
    s.position = Eigen::Map<const VectorXd>(std::data(p), p.size());
    s.velocity = Eigen::Map<const VectorXd>(std::data(v), v.size());
    return s;
  }
};

// Cost-optimal double-integrator connection between two states under the
// mixed time / control-effort penalty
//   c(tau) = tau + sum_axes integral_0^tau u_k(s)^2 ds.
// The optimal control is linear in time per axis: u_k(s) = acc0_k + jerk_k s.
struct Motion {
  State from, to;
  double tau = 0;
  double cost = 0;
  bool ok = false;
  VectorXd acc0, jerk;

  State state_at(double s) const {
    if (s <= 0) return from;
    if (s >= tau) return to;
    State out;
    const int n = from.dim();
    out.position.resize(n);
    out.velocity.resize(n);
    for (int k = 0; k < n; ++k) {
      double p0 = from.position[k], v0 = from.velocity[k];
      double a = acc0[k], j = jerk[k];
      out.position[k] = p0 + v0 * s + a * s * s / 2 + j * s * s * s / 6;
      out.velocity[k] = v0 + a * s + j * s * s / 2;
    }
    return out;
  }

  VectorXd control_at(double s) const {
    if (tau <= 0) return VectorXd::Zero(from.dim());
    s = std::clamp(s, 0.0, tau);
    return acc0 + jerk * s;
  }
};

namespace detail {

// Optimal fixed-time control coefficients and the effort integral.
inline void fixed_time_coeffs(const State& a, const State& b, double tau,
                              VectorXd& acc0, VectorXd& jerk, double& effort) {
  const int n = a.dim();
  acc0.resize(n);
  jerk.resize(n);
  effort = 0;
  for (int k = 0; k < n; ++k) {
    double dp = b.position[k] - a.position[k] - a.velocity[k] * tau;
    double dv = b.velocity[k] - a.velocity[k];
    double a0 = 6 * dp / (tau * tau) - 2 * dv / tau;
    double j = -12 * dp / (tau * tau * tau) + 6 * dv / (tau * tau);
    acc0[k] = a0;
    jerk[k] = j;
    effort += 12 * dp * dp / (tau * tau * tau) - 12 * dp * dv / (tau * tau) +
              4 * dv * dv / tau;
  }
}

}  // namespace detail

// Connection cost as a function of duration.
inline double steer_cost(const State& a, const State& b, double tau) {
  double c = tau;
  const int n = a.dim();
  for (int k = 0; k < n; ++k) {
    double dp = b.position[k] - a.position[k] - a.velocity[k] * tau;
    double dv = b.velocity[k] - a.velocity[k];
    c += 12 * dp * dp / (tau * tau * tau) - 12 * dp * dv / (tau * tau) +
         4 * dv * dv / tau;
  }
  return c;
}

// Min-effort connection with the duration fixed, used by smoothing.
inline Motion fixed_time_connect(const State& a, const State& b, double tau) {
  Motion m;
  m.from = a;
  m.to = b;
  m.tau = tau;
  m.ok = true;
  double effort;
  detail::fixed_time_coeffs(a, b, tau, m.acc0, m.jerk, effort);
  m.cost = tau + effort;
  return m;
}

// Cost-optimal connection: scalar minimization of c(tau) over (0, tau_max].
// Returns ok = false when the optimum would lie beyond tau_max.
inline Motion connect(const State& a, const State& b, double tau_max) {
  if (a.dim() != b.dim()) throw std::invalid_argument("connect: dimension mismatch");
  Motion m;
  m.from = a;
  m.to = b;

  bool identical = (a.position - b.position).cwiseAbs().maxCoeff() == 0 &&
                   (a.velocity - b.velocity).cwiseAbs().maxCoeff() == 0;
  if (identical) {
    m.ok = true;
    m.tau = 0;
    m.cost = 0;
    m.acc0 = VectorXd::Zero(a.dim());
    m.jerk = VectorXd::Zero(a.dim());
    return m;
  }

  // Geometric bracketing scan followed by golden-section refinement.
  const int kScan = 64;
  const double tau_lo = tau_max * 1e-7;
  double best_tau = tau_lo, best_c = steer_cost(a, b, tau_lo);
  int best_idx = 0;
  double ratio = std::pow(tau_max / tau_lo, 1.0 / (kScan - 1));
  double tau = tau_lo;
  for (int i = 1; i < kScan; ++i) {
    tau *= ratio;
    double c = steer_cost(a, b, tau);
    if (c < best_c) {
      best_c = c;
      best_tau = tau;
      best_idx = i;
    }
  }
  double lo = best_tau / (best_idx > 0 ? ratio : 1.0);
  double hi = std::min(best_tau * ratio, tau_max);

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = steer_cost(a, b, x1), f2 = steer_cost(a, b, x2);
  while (hi - lo > 1e-9 * hi) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = steer_cost(a, b, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = steer_cost(a, b, x2);
    }
  }
  m.tau = 0.5 * (lo + hi);
  m.cost = steer_cost(a, b, m.tau);

  // Optimum pinned to the horizon with the cost still falling means the
  // true optimum lies beyond tau_max.
  if (best_idx == kScan - 1 && m.tau > 0.999 * tau_max) {
    double eps = 1e-6 * tau_max;
    if (steer_cost(a, b, tau_max) <= steer_cost(a, b, tau_max - eps)) {
      m.ok = false;
      return m;
    }
  }

  double effort;
  detail::fixed_time_coeffs(a, b, m.tau, m.acc0, m.jerk, effort);
  m.ok = true;
  return m;
}

struct Waypoint {
  double t = 0;
  State state;
  VectorXd control;
};

// Nominal waypoints at t = 0, dt, ..., with any final partial interval
// (<= dt) absorbed into one last step ending exactly at tau.
inline std::vector<Waypoint> motion_waypoints(const Motion& m, double dt) {
  if (dt <= 0) throw std::invalid_argument("motion_waypoints: dt must be positive");
  std::vector<Waypoint> out;
  if (m.tau <= 0) {
    out.push_back({0.0, m.from, VectorXd::Zero(m.from.dim())});
    return out;
  }
  int k = static_cast<int>(std::floor(m.tau / dt + 1e-9));
  double rem = m.tau - k * dt;
  for (int i = 0; i <= k; ++i) {
    double t = i * dt;
    out.push_back({t, m.state_at(t), m.control_at(t)});
  }
  if (rem > 1e-9) {
    out.push_back({m.tau, m.to, m.control_at(m.tau)});
  } else {
    out.back().t = m.tau;
    out.back().state = m.to;
  }
  return out;
}

// Accumulated cost of the prefix [0, s] of a motion.
inline double motion_partial_cost(const Motion& m, double s) {
  if (s <= 0) return 0;
  s = std::min(s, m.tau);
  double c = s;
  for (int k = 0; k < m.from.dim(); ++k) {
    double a = m.acc0[k], j = m.jerk[k];
    // integral of (a + j t)^2 over [0, s]
    c += a * a * s + a * j * s * s + j * j * s * s * s / 3;
  }
  return c;
}

// Prefix of a motion cut so its accumulated cost equals target_cost.
inline Motion truncate_motion(const Motion& m, double target_cost) {
  if (!m.ok || m.cost <= target_cost) return m;
  double lo = 0, hi = m.tau;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (motion_partial_cost(m, mid) < target_cost)
      lo = mid;
    else
      hi = mid;
  }
  Motion out = m;
  out.tau = 0.5 * (lo + hi);
  out.to = m.state_at(out.tau);
  out.cost = motion_partial_cost(m, out.tau);
  return out;
}

}  // namespace pump
