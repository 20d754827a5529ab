#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pump/geom.hpp"
#include "pump/lti.hpp"
#include "pump/parallel.hpp"
#include "pump/rng.hpp"

namespace pump {

// Survival bitmask over the particles of a DeviationBank. Bit i set means
// particle i has not violated any half-space along the plan so far.
struct ParticleMask {
  int n = 0;
  std::vector<std::uint64_t> words;

  static ParticleMask full(int n_particles) {
    ParticleMask m;
    m.n = n_particles;
    m.words.assign((n_particles + 63) / 64, ~0ULL);
    int tail = n_particles % 64;
    if (tail) m.words.back() = (1ULL << tail) - 1;
    return m;
  }

  bool alive(int i) const { return (words[i / 64] >> (i % 64)) & 1; }
  void kill(int i) { words[i / 64] &= ~(1ULL << (i % 64)); }

  int popcount() const {
    int c = 0;
    for (auto w : words) c += std::popcount(w);
    return c;
  }

  double cp() const { return 1.0 - static_cast<double>(popcount()) / n; }
};

struct CpEstimate {
  double value = 0;
  std::string method;
  int samples = 0;
};

// Standard normal upper tail.
inline double gauss_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace detail {

inline std::vector<const HalfSpace*> dedupe(const ConvexRegion& region) {
  std::vector<const HalfSpace*> out;
  for (const auto& h : region.halfspaces) {
    bool dup = false;
    for (const auto* g : out) {
      if (g->b == h.b && g->a.size() == h.a.size() &&
          (g->a - h.a).cwiseAbs().maxCoeff() == 0) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(&h);
  }
  return out;
}

}  // namespace detail

// Pointwise collision probability of a zero-mean Gaussian deviation with
// the given workspace covariance against a convex region: first-order
// union bound over half-spaces with exact univariate marginals.
inline double pointwise_cp(const MatrixXd& cov, const ConvexRegion& region) {
  double total = 0;
  for (const auto* h : detail::dedupe(region)) {
    double var = h->a.dot(cov * h->a);
    double p;
    if (var < 1e-30) {
      p = h->b <= 0 ? 1.0 : 0.0;
    } else {
      p = gauss_tail(h->b / std::sqrt(var));
    }
    total += p;
    if (total >= 1.0) return 1.0;
  }
  return total;
}

// Union bound over waypoints.
inline double additive_cp(const std::vector<double>& pointwise) {
  double s = 0;
  for (double p : pointwise) s += p;
  return std::min(1.0, s);
}

// Independence assumption across waypoints.
inline double multiplicative_cp(const std::vector<double>& pointwise) {
  double surv = 1;
  for (double p : pointwise) surv *= 1.0 - p;
  return 1.0 - surv;
}

// Conditional multiplicative approximation: a Gaussian on the joint
// deviation (dx, dx_hat) is propagated through the closed loop; at each
// waypoint the per-step collision probability is computed against that
// waypoint's half-spaces, then the Gaussian is truncated one-sidedly
// (moment-matched, applied sequentially per half-space) before the next
// propagation step. regions[t] may be null to skip a waypoint.
inline double conditional_multiplicative_cp(const DiscreteModel& dm, const GainSchedule& gs,
                                            const MatrixXd& sigma0,
                                            const std::vector<const ConvexRegion*>& regions) {
  ClosedLoopDynamics cl = closed_loop(dm, gs, sigma0);
  const int d = cl.d;
  const int nz = 2 * d;
  VectorXd mean = VectorXd::Zero(nz);
  MatrixXd cov = MatrixXd::Zero(nz, nz);
  cov.topLeftCorner(d, d) = sigma0;
  MatrixXd vq = cl.Sv * cl.Sv.transpose();
  MatrixXd wq = cl.Sw * cl.Sw.transpose();

  double survive = 1.0;
  for (std::size_t t = 0; t < regions.size(); ++t) {
    if (regions[t]) {
      double step_p = 0;
      for (const auto* h : detail::dedupe(*regions[t])) {
        VectorXd g = VectorXd::Zero(nz);
        g.head(d) = cl.C.transpose() * h->a;
        double mu = g.dot(mean);
        double var = g.dot(cov * g);
        if (var < 1e-14) {
          // covariance collapsed along this direction; deterministic check
          if (mu > h->b) step_p = 1.0;
          continue;
        }
        double sigma = std::sqrt(var);
        double beta = (h->b - mu) / sigma;
        double keep = 1.0 - gauss_tail(beta);  // Phi(beta)
        step_p += gauss_tail(beta);
        if (keep < 1e-12) {
          step_p = 1.0;
          continue;
        }
        // Moment-matched truncation to g'z <= b, pushed back into the
        // joint via a rank-one update along cov*g.
        double phi = std::exp(-0.5 * beta * beta) / std::sqrt(2.0 * 3.14159265358979323846);
        double r = phi / keep;
        double new_mu = mu - sigma * r;
        double new_var = var * (1.0 - beta * r - r * r);
        new_var = std::max(new_var, 0.0);
        VectorXd cg = cov * g;
        mean += ((new_mu - mu) / var) * cg;
        cov += ((new_var - var) / (var * var)) * (cg * cg.transpose());
      }
      step_p = std::min(1.0, step_p);
      survive *= 1.0 - step_p;
      if (survive <= 0) return 1.0;
    }
    if (t + 1 < regions.size()) {
      mean = cl.F * mean;
      cov = cl.F * cov * cl.F.transpose() + cl.Gv * vq * cl.Gv.transpose() +
            cl.Gw * wq * cl.Gw.transpose();
    }
  }
  return 1.0 - survive;
}

// One HSMC check unit: a global bank timestep and the region (with
// velocity-projected half-spaces) attached to that nominal waypoint.
struct HsmcStep {
  int t = 0;
  const ConvexRegion* region = nullptr;
};

// Extends a survival mask along new waypoints. The input mask is not
// mutated; plans share ancestor masks by value.
inline std::pair<ParticleMask, double> hsmc_extend(const ParticleMask& mask,
                                                   const DeviationBank& bank,
                                                   const std::vector<HsmcStep>& steps) {
  ParticleMask out = mask;
  const int dw = bank.dw;
  for (const auto& step : steps) {
    if (step.t < 0 || step.t > bank.horizon)
      throw std::out_of_range("hsmc_extend: plan exceeds bank horizon");
    if (!step.region || step.region->halfspaces.empty()) continue;
    const double* dy = bank.at(step.t);
    for (const auto& h : step.region->halfspaces) {
      const double* a = h.a.data();
      const double b = h.b;
      for (std::size_t wi = 0; wi < out.words.size(); ++wi) {
        std::uint64_t word = out.words[wi];
        while (word) {
          int bit = std::countr_zero(word);
          word &= word - 1;
          int i = static_cast<int>(wi) * 64 + bit;
          const double* p = dy + static_cast<std::size_t>(i) * dw;
          double s = 0;
          for (int k = 0; k < dw; ++k) s += a[k] * p[k];
          if (s > b) out.words[wi] &= ~(1ULL << bit);
        }
      }
    }
  }
  return {out, out.cp()};
}

// Asymptotically exact CP estimate: closed-loop rollouts around the
// nominal workspace trajectory with full collision checking of the
// realized path (points plus inter-step segments). Deterministic given
// the seed and data-parallel over rollouts.
inline CpEstimate mc_certify(const std::vector<VectorXd>& y_nom, const ClosedLoopDynamics& cl,
                             const Workspace& w, int n_mc, std::uint64_t seed,
                             double eps_cc, int workers = 1) {
  if (n_mc < 1) throw std::invalid_argument("mc_certify: need at least one rollout");
  if (y_nom.empty()) throw std::invalid_argument("mc_certify: empty trajectory");
  const int d = cl.d;
  const int dw = cl.dw;
  const int T = static_cast<int>(y_nom.size()) - 1;

  std::vector<char> hit(n_mc, 0);
  parallel_for(n_mc, workers, [&](std::size_t lo, std::size_t hi) {
    VectorXd z(2 * d), nv(d), nw(dw), y(dw), prev(dw);
    for (std::size_t i = lo; i < hi; ++i) {
      for (int k = 0; k < d; ++k) nv[k] = rng::normal(seed, i, 0, rng::kInitial + k);
      z.head(d) = cl.S0 * nv;
      z.tail(d).setZero();
      bool collided = false;
      for (int t = 0; t <= T && !collided; ++t) {
        y = y_nom[t] + cl.C * z.head(d);
        if (!point_free(w, y)) {
          collided = true;
          break;
        }
        if (t > 0) {
          // straight-segment check between successive realized states,
          // subdivided to resolution eps_cc
          double len = (y - prev).norm();
          int segs = std::max(1, static_cast<int>(std::ceil(len / std::max(eps_cc, 1e-12))));
          VectorXd p0 = prev;
          for (int s2 = 1; s2 <= segs && !collided; ++s2) {
            VectorXd p1 = prev + (y - prev) * (static_cast<double>(s2) / segs);
            if (!point_free(w, p1) || detail::segment_collides(w, p0, p1)) collided = true;
            p0 = p1;
          }
        }
        prev = y;
        if (t < T) {
          for (int k = 0; k < d; ++k) nv[k] = rng::normal(seed, i, t, rng::kProcess + k);
          for (int k = 0; k < dw; ++k)
            nw[k] = rng::normal(seed, i, t + 1, rng::kMeasurement + k);
          z = cl.F * z + cl.Gv * (cl.Sv * nv) + cl.Gw * (cl.Sw * nw);
        }
      }
      hit[i] = collided ? 1 : 0;
    }
  });

  long n_hit = 0;
  for (char h : hit) n_hit += h;
  CpEstimate est;
  est.value = static_cast<double>(n_hit) / n_mc;
  est.method = "mc";
  est.samples = n_mc;
  return est;
}

}  // namespace pump
