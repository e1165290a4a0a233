#pragma once

#include "lohe/dynamics.hpp"
#include "lohe/hull.hpp"
#include "lohe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lohe {

class IntegrationDiverged : public std::runtime_error {
 public:
  explicit IntegrationDiverged(double t)
      : std::runtime_error("integration diverged at t = " + std::to_string(t)), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

// ---------------------------------------------------------------------------
// Synchronization diagnostics
// ---------------------------------------------------------------------------

namespace detail {

// Best direction for the max–min problem restricted to an active set: points
// whose value is within `slack` of the minimum are made equidistant from y,
// and y is chosen in that subspace to maximize their common inner product.
inline bool equalize_active_set(const Matrix& pts, const Vector& y, double slack, Vector& out) {
  const Vector vals = pts.transpose() * y;
  const double m = vals.minCoeff();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] <= m + slack) active.push_back(i);
  const Eigen::Index d = pts.rows();
  const Vector anchor = pts.col(active.front());
  Matrix basis;
  if (active.size() == 1) {
    basis = Matrix::Identity(d, d);
  } else {
    Matrix diffs(d, static_cast<Eigen::Index>(active.size()) - 1);
    for (std::size_t k = 1; k < active.size(); ++k)
      diffs.col(static_cast<Eigen::Index>(k) - 1) = pts.col(active[k]) - anchor;
    Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] > cutoff) ++rank;
    if (rank >= d) return false;
    basis = svd.matrixU().rightCols(d - rank);
  }
  Vector c = basis.transpose() * anchor;
  if (c.norm() <= 1e-12) c = basis.transpose() * y;
  if (c.norm() <= 1e-12) return false;
  out = basis * (c / c.norm());
  return true;
}

}  // namespace detail

inline constexpr int kSyncRadiusRestarts = 8;

// Angular radius of the smallest spherical cap holding every agent,
// arccos(max_{|y|=1} min_i ⟨x_i, y⟩). When the agents lie in an open
// hemisphere the max–min value equals the norm of the minimum-norm point of
// their convex hull and the radius is exact. Otherwise projected ascent runs
// from the mean direction and fixed-seed restarts, so the result is an upper
// bound that never grows when `iters` is raised.
inline double sync_radius(const Configuration& x, int iters = 500) {
  const Matrix& pts = x.matrix();
  const MinNormPoint hull = min_norm_point(pts);
  const double hull_norm = hull.point.norm();
  if (hull_norm > 1e-12) return std::acos(std::clamp(hull_norm, -1.0, 1.0));

  double best = -std::numeric_limits<double>::infinity();
  auto value_of = [&pts](const Vector& y, Eigen::Index& arg) {
    return (pts.transpose() * y).minCoeff(&arg);
  };

  std::vector<Vector> starts;
  const Vector mean = pts.rowwise().mean();
  starts.push_back(mean.norm() > 1e-12 ? Vector(mean / mean.norm()) : Vector(pts.col(0)));
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (int r = 0; r < kSyncRadiusRestarts; ++r)
    starts.push_back(random_unit(rng, x.sphere_dim()).coords());

  for (const Vector& start : starts) {
    Vector y = start;
    double local_best = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= iters; ++k) {
      Eigen::Index arg = 0;
      const double v = value_of(y, arg);
      if (v > local_best) {
        local_best = v;
        best = std::max(best, v);
        for (double slack : {1e-9, 1e-6, 1e-3, 1e-2, 1e-1}) {
          Vector polished;
          if (detail::equalize_active_set(pts, y, slack, polished)) {
            Eigen::Index unused = 0;
            best = std::max(best, value_of(polished, unused));
          }
        }
      }
      const Vector g = pts.col(arg) - y * y.dot(pts.col(arg));
      if (g.norm() < 1e-15) break;
      y += g / std::sqrt(static_cast<double>(k));
      y.normalize();
    }
  }
  return std::acos(std::clamp(best, -1.0, 1.0));
}

inline bool is_practically_synced(const Configuration& x, double half_angle = kPi / 4) {
  if (!(half_angle > 0.0 && half_angle < kPi / 2))
    throw std::invalid_argument("is_practically_synced: half_angle must lie in (0, pi/2)");
  // Radii below pi/2 are always resolved exactly by the hull test.
  return sync_radius(x) < half_angle;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

struct SampleDiagnostics {
  double disagreement = 0.0;
  double sync_radius = 0.0;
  double min_edge_angle = 0.0;
  double max_edge_angle = 0.0;
  double norm_drift = 0.0;  // max pre-renormalization |‖x_i‖ − 1| since the last sample
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> states;
  std::vector<SampleDiagnostics> diagnostics;
  double max_norm_drift = 0.0;

  const Configuration& final_state() const { return states.back(); }
};

inline SampleDiagnostics diagnose(const CouplingGraph& graph, const Configuration& x,
                                  double drift) {
  SampleDiagnostics s;
  s.disagreement = disagreement(graph, x);
  s.sync_radius = sync_radius(x);
  s.min_edge_angle = graph.edges().empty() ? 0.0 : kPi;
  for (const auto& e : graph.edges()) {
    const double a = std::acos(std::clamp(x.point(e.i).dot(x.point(e.j)), -1.0, 1.0));
    s.min_edge_angle = std::min(s.min_edge_angle, a);
    s.max_edge_angle = std::max(s.max_edge_angle, a);
  }
  s.norm_drift = drift;
  return s;
}

namespace detail {

// One classical RK4 step of the ambient field followed by per-agent
// renormalization. Returns the pre-renormalization norm drift.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const LoheSystem& sys)
      : sys_(sys),
        k1_(sys.dim(), sys.agent_count()),
        k2_(k1_.rows(), k1_.cols()),
        k3_(k1_.rows(), k1_.cols()),
        k4_(k1_.rows(), k1_.cols()),
        tmp_(k1_.rows(), k1_.cols()) {}

  double step(Matrix& x, double h) {
    hetero_rhs_into(sys_, x, k1_);
    tmp_ = x + (0.5 * h) * k1_;
    hetero_rhs_into(sys_, tmp_, k2_);
    tmp_ = x + (0.5 * h) * k2_;
    hetero_rhs_into(sys_, tmp_, k3_);
    tmp_ = x + h * k3_;
    hetero_rhs_into(sys_, tmp_, k4_);
    x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    double drift = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      const double norm = x.col(i).norm();
      drift = std::max(drift, std::abs(norm - 1.0));
      x.col(i) /= norm;
    }
    return drift;
  }

  // Field at the state passed to the last step() call.
  const Matrix& last_rate() const { return k1_; }

 private:
  const LoheSystem& sys_;
  Matrix k1_, k2_, k3_, k4_, tmp_;
};

inline bool all_finite(const Matrix& x) { return x.allFinite(); }

}  // namespace detail

// Fixed-step RK4 with renormalization. The step is dt shortened uniformly so
// that an integer number of steps lands exactly on t_end. Samples are taken at
// t = 0, every `sample_every` steps, and at t_end.
inline Trajectory integrate(const LoheSystem& sys, const Configuration& x0, double dt,
                            double t_end, int sample_every = 100) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
  if (sample_every < 1) throw std::invalid_argument("integrate: sample_every must be >= 1");
  detail::check_state(sys.graph(), x0.dim(), x0.size(), sys.dim());

  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  traj.diagnostics.push_back(diagnose(sys.graph(), x0, 0.0));

  detail::Rk4Stepper stepper(sys);
  Matrix x = x0.matrix();
  double window_drift = 0.0;
  for (long k = 1; k <= steps; ++k) {
    const double drift = stepper.step(x, h);
    const double t = (k == steps) ? t_end : h * static_cast<double>(k);
    if (!std::isfinite(drift) || !detail::all_finite(x)) throw IntegrationDiverged(t);
    window_drift = std::max(window_drift, drift);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (k % sample_every == 0 || k == steps) {
      Configuration state(x);
      traj.times.push_back(t);
      traj.diagnostics.push_back(diagnose(sys.graph(), state, window_drift));
      traj.states.push_back(std::move(state));
      window_drift = 0.0;
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Equilibria
// ---------------------------------------------------------------------------

struct EquilibriumResult {
  Configuration config;
  double residual = 0.0;  // max_i |ẋ_i|
  int iterations = 0;     // Newton steps taken
  bool converged = false;
  double integrated_time = 0.0;
};

inline constexpr double kNewtonDamping = 1e-8;

// Integrates until the residual drops below 10·tol (or max_time elapses), then
// polishes with Levenberg–Marquardt-damped Newton steps on the tangent bundle.
// Equilibria come in rotation orbits, so the undamped normal equations are
// singular; the Tikhonov term picks the minimum-norm update.
inline EquilibriumResult find_equilibrium(const LoheSystem& sys, const Configuration& x0,
                                          double tol, double max_time, double dt = 1e-3,
                                          int max_newton = 50) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_equilibrium: tol must be positive");
  EquilibriumResult res{x0};
  res.residual = residual(sys, x0);
  if (res.residual <= tol) {
    res.converged = true;
    return res;
  }

  Matrix x = x0.matrix();
  detail::Rk4Stepper stepper(sys);
  Matrix rate(x.rows(), x.cols());
  double t = 0.0;
  while (t < max_time) {
    detail::hetero_rhs_into(sys, x, rate);
    double r = 0.0;
    for (Eigen::Index i = 0; i < rate.cols(); ++i) r = std::max(r, rate.col(i).norm());
    if (!std::isfinite(r)) break;
    if (r <= 10.0 * tol) break;
    stepper.step(x, dt);
    t += dt;
  }
  res.integrated_time = t;
  if (!detail::all_finite(x)) return res;

  Configuration current(x);
  double current_res = residual(sys, current);
  while (current_res > tol && res.iterations < max_newton) {
    const Matrix jac = fd_jacobian(sys, current);
    const Matrix q = tangent_basis(current);
    const Matrix jq = jac * q;
    const TangentField f = hetero_rhs(sys, current);
    const Eigen::Map<const Vector> fvec(f.vectors.data(), f.vectors.size());
    Matrix normal = jq.transpose() * jq;
    normal.diagonal().array() += kNewtonDamping;
    const Vector c = normal.ldlt().solve(-(jq.transpose() * fvec));
    const Vector delta = q * c;

    bool improved = false;
    for (double step = 1.0; step > 1e-6; step *= 0.5) {
      Matrix trial = current.matrix();
      trial += step * Eigen::Map<const Matrix>(delta.data(), trial.rows(), trial.cols());
      Configuration candidate = Configuration::normalized(trial);
      const double r = residual(sys, candidate);
      if (r < current_res) {
        current = std::move(candidate);
        current_res = r;
        improved = true;
        break;
      }
    }
    ++res.iterations;
    if (!improved) break;
  }
  res.config = current;
  res.residual = current_res;
  res.converged = current_res <= tol;
  return res;
}

}  // namespace lohe
