#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "pump/parallel.hpp"
#include "pump/rng.hpp"

namespace pump {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Continuous-time linear-Gaussian model
//   x' = A x + B u + v,  y = C x + w
// with process noise PSD V and measurement noise PSD W.
struct ContinuousModel {
  MatrixXd A, B, C, V, W;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int output_dim() const { return static_cast<int>(C.rows()); }
};

// Zero-order-hold discretization of a ContinuousModel at timestep dt.
struct DiscreteModel {
  MatrixXd A, B, C, V, W;
  double dt = 0;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int output_dim() const { return static_cast<int>(C.rows()); }
};

struct LqgWeights {
  MatrixXd Q, R, F;
};

// Steady-state LQR feedback gain and Kalman gain, together with the
// initial estimate-error covariance the schedule was built for.
struct GainSchedule {
  MatrixXd L;       // feedback gain, input_dim x state_dim
  MatrixXd K;       // Kalman gain, state_dim x output_dim
  MatrixXd sigma0;  // initial state covariance
};

namespace detail {

inline void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline bool is_psd(const MatrixXd& m, double tol = 1e-9) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + m.cwiseAbs().maxCoeff()))
    return false;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  return es.eigenvalues().minCoeff() >= -tol * (1.0 + m.cwiseAbs().maxCoeff());
}

// Symmetric PSD square root with negative eigenvalues clamped to zero.
inline MatrixXd psd_sqrt(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

// Exact ZOH discretization via the Van Loan augmented-matrix exponential:
//   A = exp(Ac dt), B = (int_0^dt exp(Ac s) ds) Bc,
//   V = int_0^dt exp(Ac s) Vc exp(Ac' s) ds, W = Wc / dt.
inline DiscreteModel discretize(const ContinuousModel& cm, double dt) {
  const int d = cm.state_dim();
  const int l = cm.input_dim();
  const int dw = cm.output_dim();
  detail::require(dt > 0, "discretize: dt must be positive");
  detail::require(cm.B.rows() == d, "discretize: B row dimension mismatch");
  detail::require(cm.C.cols() == d, "discretize: C column dimension mismatch");
  detail::require(cm.V.rows() == d && cm.V.cols() == d, "discretize: V dimension mismatch");
  detail::require(cm.W.rows() == dw && cm.W.cols() == dw, "discretize: W dimension mismatch");
  detail::require(detail::is_psd(cm.V), "discretize: V_c must be symmetric PSD");
  detail::require(detail::is_psd(cm.W), "discretize: W_c must be symmetric PSD");

  DiscreteModel dm;
  dm.dt = dt;
  dm.C = cm.C;
  dm.W = cm.W / dt;

  // [A B; 0 0] exponential gives A and the input integral in one shot.
  MatrixXd m1 = MatrixXd::Zero(d + l, d + l);
  m1.topLeftCorner(d, d) = cm.A * dt;
  m1.topRightCorner(d, l) = cm.B * dt;
  MatrixXd e1 = m1.exp();
  dm.A = e1.topLeftCorner(d, d);
  dm.B = e1.topRightCorner(d, l);

  // [-A V; 0 A'] exponential gives the process-noise integral.
  MatrixXd m2 = MatrixXd::Zero(2 * d, 2 * d);
  m2.topLeftCorner(d, d) = -cm.A * dt;
  m2.topRightCorner(d, d) = cm.V * dt;
  m2.bottomRightCorner(d, d) = cm.A.transpose() * dt;
  MatrixXd e2 = m2.exp();
  MatrixXd v = e2.bottomRightCorner(d, d).transpose() * e2.topRightCorner(d, d);
  dm.V = 0.5 * (v + v.transpose());
  return dm;
}

// Steady-state LQG synthesis: discrete Riccati recursions iterated until
// successive iterates differ by < 1e-10 in max-abs entry (cap 10,000).
inline GainSchedule lqg_synthesize(const DiscreteModel& dm, const LqgWeights& w,
                                   const MatrixXd& sigma0) {
  const int d = dm.state_dim();
  const double tol = 1e-10;
  const int max_iter = 10000;

  // Control Riccati, started from the terminal penalty.
  MatrixXd p = w.F;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    MatrixXd bpb = w.R + dm.B.transpose() * p * dm.B;
    MatrixXd bpa = dm.B.transpose() * p * dm.A;
    MatrixXd next = w.Q + dm.A.transpose() * p * dm.A -
                    bpa.transpose() * bpb.ldlt().solve(bpa);
    next = 0.5 * (next + next.transpose());
    double diff = (next - p).cwiseAbs().maxCoeff();
    p = next;
    if (!p.allFinite())
      throw std::runtime_error("lqg_synthesize: control Riccati diverged");
    if (diff < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("lqg_synthesize: control Riccati did not converge");

  GainSchedule gs;
  gs.sigma0 = sigma0;
  MatrixXd bpb = w.R + dm.B.transpose() * p * dm.B;
  gs.L = -bpb.ldlt().solve(dm.B.transpose() * p * dm.A);

  // Filter Riccati on the predicted covariance, started from sigma0.
  MatrixXd s = sigma0;
  converged = false;
  auto kalman_gain = [&](const MatrixXd& cov) -> MatrixXd {
    MatrixXd innov = dm.C * cov * dm.C.transpose() + dm.W;
    // fully deterministic output with zero innovation covariance
    if (innov.cwiseAbs().maxCoeff() < 1e-300)
      return MatrixXd::Zero(d, dm.output_dim());
    return cov * dm.C.transpose() *
           innov.ldlt().solve(MatrixXd::Identity(innov.rows(), innov.cols()));
  };
  for (int it = 0; it < max_iter; ++it) {
    MatrixXd gain = kalman_gain(s);
    MatrixXd upd = s - gain * dm.C * s;
    MatrixXd next = dm.A * upd * dm.A.transpose() + dm.V;
    next = 0.5 * (next + next.transpose());
    double diff = (next - s).cwiseAbs().maxCoeff();
    s = next;
    if (!s.allFinite())
      throw std::runtime_error("lqg_synthesize: filter Riccati diverged");
    if (diff < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("lqg_synthesize: filter Riccati did not converge");

  gs.K = kalman_gain(s);
  return gs;
}

// Closed-loop recursion for the joint deviation z = (dx, dx_hat):
//   z_{t+1} = F z_t + Gv v_t + Gw w_{t+1}
// where the estimate is predicted with the LQG control and corrected with
// the steady-state Kalman gain against the measurement at t+1.
struct ClosedLoopDynamics {
  MatrixXd F;   // 2d x 2d
  MatrixXd Gv;  // 2d x d
  MatrixXd Gw;  // 2d x dw
  MatrixXd Sv;  // process-noise square root, d x d
  MatrixXd Sw;  // measurement-noise square root, dw x dw
  MatrixXd S0;  // initial-covariance square root, d x d
  MatrixXd C;   // workspace projection, dw x d
  int d = 0, dw = 0;
};

inline ClosedLoopDynamics closed_loop(const DiscreteModel& dm, const GainSchedule& gs,
                                      const MatrixXd& sigma0) {
  const int d = dm.state_dim();
  const int dw = dm.output_dim();
  ClosedLoopDynamics cl;
  cl.d = d;
  cl.dw = dw;
  cl.C = dm.C;
  MatrixXd bl = dm.B * gs.L;
  MatrixXd kc = gs.K * dm.C;
  MatrixXd i = MatrixXd::Identity(d, d);
  cl.F = MatrixXd::Zero(2 * d, 2 * d);
  cl.F.topLeftCorner(d, d) = dm.A;
  cl.F.topRightCorner(d, d) = bl;
  cl.F.bottomLeftCorner(d, d) = kc * dm.A;
  cl.F.bottomRightCorner(d, d) = (i - kc) * (dm.A + bl) + kc * bl;
  cl.Gv = MatrixXd::Zero(2 * d, d);
  cl.Gv.topRows(d) = i;
  cl.Gv.bottomRows(d) = kc;
  cl.Gw = MatrixXd::Zero(2 * d, dw);
  cl.Gw.bottomRows(d) = gs.K;
  cl.Sv = detail::psd_sqrt(dm.V);
  cl.Sw = detail::psd_sqrt(dm.W);
  cl.S0 = detail::psd_sqrt(sigma0);
  return cl;
}

// Workspace marginal covariances C Cov(dx_t) C' for t = 0..T under the
// closed-loop LQG recursion, starting from Cov(dx_0) = sigma0, dx_hat_0 = 0.
inline std::vector<MatrixXd> propagate_covariances(const DiscreteModel& dm,
                                                   const GainSchedule& gs,
                                                   const MatrixXd& sigma0, int T) {
  detail::require(T >= 0, "propagate_covariances: T must be nonnegative");
  ClosedLoopDynamics cl = closed_loop(dm, gs, sigma0);
  const int d = cl.d;
  MatrixXd sz = MatrixXd::Zero(2 * d, 2 * d);
  sz.topLeftCorner(d, d) = sigma0;
  std::vector<MatrixXd> out;
  out.reserve(T + 1);
  MatrixXd vq = cl.Sv * cl.Sv.transpose();
  MatrixXd wq = cl.Sw * cl.Sw.transpose();
  for (int t = 0;; ++t) {
    out.push_back(dm.C * sz.topLeftCorner(d, d) * dm.C.transpose());
    if (t == T) break;
    sz = cl.F * sz * cl.F.transpose() + cl.Gv * vq * cl.Gv.transpose() +
         cl.Gw * wq * cl.Gw.transpose();
  }
  return out;
}

// N pre-sampled closed-loop workspace deviation trajectories, laid out
// particle-major per timestep: entry(i, t, k) = dy[t * n * dw + i * dw + k].
struct DeviationBank {
  int n_particles = 0;
  int horizon = 0;  // valid timesteps are 0..horizon
  int dw = 0;
  std::uint64_t seed = 0;
  std::vector<double> dy;

  const double* at(int t) const { return dy.data() + static_cast<std::size_t>(t) * n_particles * dw; }
  double entry(int i, int t, int k) const {
    return dy[(static_cast<std::size_t>(t) * n_particles + i) * dw + k];
  }
};

inline DeviationBank presample_bank(const DiscreteModel& dm, const GainSchedule& gs,
                                    const MatrixXd& sigma0, int t_max, int n,
                                    std::uint64_t seed, int workers = 1) {
  detail::require(n >= 1, "presample_bank: need at least one particle");
  detail::require(t_max >= 1, "presample_bank: horizon must be at least 1");
  ClosedLoopDynamics cl = closed_loop(dm, gs, sigma0);
  const int d = cl.d;
  const int dw = cl.dw;

  DeviationBank bank;
  bank.n_particles = n;
  bank.horizon = t_max;
  bank.dw = dw;
  bank.seed = seed;
  bank.dy.assign(static_cast<std::size_t>(t_max + 1) * n * dw, 0.0);

  parallel_for(n, workers, [&](std::size_t lo, std::size_t hi) {
    VectorXd z(2 * d), nv(d), nw(dw), y(dw);
    for (std::size_t i = lo; i < hi; ++i) {
      for (int k = 0; k < d; ++k) nv[k] = rng::normal(seed, i, 0, rng::kInitial + k);
      z.head(d) = cl.S0 * nv;
      z.tail(d).setZero();
      for (int t = 0;; ++t) {
        y = cl.C * z.head(d);
        double* slot = bank.dy.data() +
                       (static_cast<std::size_t>(t) * n + i) * dw;
        for (int k = 0; k < dw; ++k) slot[k] = y[k];
        if (t == t_max) break;
        for (int k = 0; k < d; ++k) nv[k] = rng::normal(seed, i, t, rng::kProcess + k);
        for (int k = 0; k < dw; ++k) nw[k] = rng::normal(seed, i, t + 1, rng::kMeasurement + k);
        z = cl.F * z + cl.Gv * (cl.Sv * nv) + cl.Gw * (cl.Sw * nw);
      }
    }
  });
  return bank;
}

}  // namespace pump
