#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pump/steer.hpp"

namespace pump {

struct Aabb {
  VectorXd lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  // Closed containment: points on the boundary count as inside.
  bool contains(const VectorXd& p) const {
    for (int k = 0; k < dim(); ++k)
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
    return true;
  }

  VectorXd clamp(const VectorXd& p) const {
    return p.cwiseMax(lo).cwiseMin(hi);
  }

  double shortest_edge() const { return (hi - lo).minCoeff(); }

  static Aabb make(std::initializer_list<double> l, std::initializer_list<double> h) {
    Aabb b;
    b.lo = Eigen::Map<const VectorXd>(std::data(l), l.size());
    b.hi = Eigen::Map<const VectorXd>(std::data(h), h.size());
    return b;
  }
};

// Workspace as bounds minus a union of axis-aligned boxes. Obstacles may
// overlap each other.
struct Workspace {
  Aabb bounds;
  std::vector<Aabb> obstacles;

  int dim() const { return bounds.dim(); }

  double min_obstacle_edge() const {
    double e = bounds.shortest_edge();
    for (const auto& o : obstacles) e = std::min(e, o.shortest_edge());
    return e;
  }
};

// Free iff inside the bounds and strictly outside every obstacle;
// obstacle boundaries count as collision.
inline bool point_free(const Workspace& w, const VectorXd& y) {
  if (!w.bounds.contains(y)) return false;
  for (const auto& o : w.obstacles)
    if (o.contains(y)) return false;
  return true;
}

// Segment-vs-box slab test (closed box, touching counts as a hit).
inline bool segment_hits_aabb(const VectorXd& p0, const VectorXd& p1, const Aabb& box) {
  double tmin = 0.0, tmax = 1.0;
  for (int k = 0; k < box.dim(); ++k) {
    double d = p1[k] - p0[k];
    if (std::abs(d) < 1e-300) {
      if (p0[k] < box.lo[k] || p0[k] > box.hi[k]) return false;
      continue;
    }
    double t0 = (box.lo[k] - p0[k]) / d;
    double t1 = (box.hi[k] - p0[k]) / d;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return false;
  }
  return true;
}

namespace detail {

inline bool segment_collides(const Workspace& w, const VectorXd& p0, const VectorXd& p1) {
  for (const auto& o : w.obstacles)
    if (segment_hits_aabb(p0, p1, o)) return true;
  return false;
}

}  // namespace detail

// True iff the nominal workspace path of the motion intersects the
// obstacle set or leaves the bounds. Samples adaptively until consecutive
// points are within eps_cc of each other, then applies an exact
// segment-vs-box test between samples.
inline bool motion_collides(const Workspace& w, const Motion& m, double eps_cc) {
  if (!m.ok) return true;
  auto pos = [&](double t) { return m.state_at(t).position; };
  if (!point_free(w, pos(0))) return true;
  if (m.tau <= 0) return false;
  if (!point_free(w, pos(m.tau))) return true;

  struct Span {
    double t0, t1;
    VectorXd p0, p1;
  };
  std::vector<Span> stack;
  stack.push_back({0.0, m.tau, pos(0), pos(m.tau)});
  while (!stack.empty()) {
    Span s = std::move(stack.back());
    stack.pop_back();
    if ((s.p1 - s.p0).norm() <= eps_cc || s.t1 - s.t0 < 1e-9) {
      if (detail::segment_collides(w, s.p0, s.p1)) return true;
      continue;
    }
    double tm = 0.5 * (s.t0 + s.t1);
    VectorXd pm = pos(tm);
    if (!point_free(w, pm)) return true;
    stack.push_back({s.t0, tm, s.p0, pm});
    stack.push_back({tm, s.t1, std::move(pm), s.p1});
  }
  return false;
}

// Vector from y to the closest point of the closest non-excluded obstacle,
// or nothing when every obstacle is excluded. The closest point on a box
// is the componentwise clamp of y.
inline std::optional<VectorXd> nearest_obstacle_vector(const Workspace& w, const VectorXd& y,
                                                       const std::vector<char>& excluded) {
  std::optional<VectorXd> best;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
    if (i < excluded.size() && excluded[i]) continue;
    VectorXd d = w.obstacles[i].clamp(y) - y;
    double sq = d.squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      best = d;
    }
  }
  return best;
}

// Half-space a'dy > b marking the collision side, in deviation coordinates
// relative to the waypoint it was built for.
struct HalfSpace {
  VectorXd a;
  double b = 0;
  bool fallback = false;  // degenerate projection, kept unprojected
};

struct ConvexRegion {
  VectorXd center;
  std::vector<HalfSpace> halfspaces;
};

// Velocity projection of an obstacle direction vector (the collision
// check should only fire for motion towards the obstacle):
//   a = d - ((d.ydot)/(ydot.ydot)) ydot,  b = a.a.
// Falls back to the unprojected half-space a = d when the velocity is
// negligible or the projection annihilates d (head-on approach), since a
// vacuous constraint would silently ignore exactly that case.
inline HalfSpace project_halfspace(const VectorXd& d, const VectorXd& ydot,
                                   double eps_v = 1e-6, double eps_a = 1e-6) {
  HalfSpace h;
  double vn = ydot.norm();
  if (vn < eps_v) {
    h.a = d;
    h.b = d.squaredNorm();
    h.fallback = true;
    return h;
  }
  VectorXd a = d - (d.dot(ydot) / ydot.squaredNorm()) * ydot;
  if (a.norm() < eps_a * d.norm()) {
    h.a = d;
    h.b = d.squaredNorm();
    h.fallback = true;
    return h;
  }
  h.a = a;
  h.b = a.squaredNorm();
  return h;
}

// Local convex region around a free waypoint: repeatedly take the nearest
// unpruned obstacle point, form its half-space, and prune every obstacle
// whose corners all lie on the far side. Each direction is then velocity
// projected for the collision check.
inline ConvexRegion local_convex_region(const Workspace& w, const VectorXd& y_nom,
                                        const VectorXd& ydot) {
  if (!point_free(w, y_nom))
    throw std::invalid_argument("local_convex_region: waypoint is in collision");
  ConvexRegion region;
  region.center = y_nom;
  const int dw = w.dim();
  std::vector<char> pruned(w.obstacles.size(), 0);
  for (std::size_t iter = 0; iter < w.obstacles.size(); ++iter) {
    auto d = nearest_obstacle_vector(w, y_nom, pruned);
    if (!d) break;
    double dd = d->squaredNorm();
    double tol = 1e-12 * (1.0 + dd);
    bool pruned_any = false;
    for (std::size_t i = 0; i < w.obstacles.size(); ++i) {
      if (pruned[i]) continue;
      const Aabb& o = w.obstacles[i];
      bool inside = true;
      for (unsigned corner = 0; corner < (1u << dw) && inside; ++corner) {
        double dot = 0;
        for (int k = 0; k < dw; ++k) {
          double c = (corner >> k) & 1 ? o.hi[k] : o.lo[k];
          dot += (*d)[k] * (c - y_nom[k]);
        }
        if (dot < dd - tol) inside = false;
      }
      if (inside) {
        pruned[i] = 1;
        pruned_any = true;
      }
    }
    if (!pruned_any)
      throw std::runtime_error("local_convex_region: pruning loop failed to make progress");
    region.halfspaces.push_back(project_halfspace(*d, ydot));
  }
  return region;
}

}  // namespace pump
