/*
 * stability.hpp : instability certificate for dispersed equilibria.
 *
 * At any configuration the Rayleigh quotient of B along (w, …, w)/√N,
 * averaged over unit w, gives
 *
 *   β(x) ≥ f(x) = 2/(N(n+1)) Σ_{{i,j}∈E} k_ij (n−1−cos θ_ij)(1−cos θ_ij).
 *
 * Minimizing f over dispersed configurations reduces to the angle problem
 *
 *   min g(θ) = 2K/(N(n+1)) Σ_i (n−1−cos θ_i)(1−cos θ_i)   s.t. Σ_i θ_i = π,
 *
 * whose Lagrange stationary points are either uniform (θ_i = π/N, value g1)
 * or have one angle φ > π/2 and the rest (π−φ)/(N−1) (value g2). The
 * resulting frequency threshold is
 *
 *   (Σ|Ω_i|₂²)^{1/2} < c·K/(n+1) (n−1−cos π/N)(1−cos π/N),   c ∈ {1, 2},
 *
 * with c = 1 the conservative default.
 */

#pragma once

#include "lohe/dynamics.hpp"
#include "lohe/hull.hpp"
#include "lohe/spectral.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lohe {

// ---------------------------------------------------------------------------
// Dispersed configurations
// ---------------------------------------------------------------------------

struct DispersedReport {
  bool dispersed = false;
  double hull_min_norm = 0.0;
  std::optional<UnitVector> witness;  // open-hemisphere centre when not dispersed
};

// Not dispersed iff some open hemisphere holds every agent iff the origin is
// not in the convex hull. Agents on a closed hemisphere's boundary count as
// dispersed.
inline DispersedReport is_dispersed(const Configuration& x, double tol = 1e-9) {
  const MinNormPoint hull = min_norm_point(x.matrix());
  DispersedReport r;
  r.hull_min_norm = hull.point.norm();
  r.dispersed = r.hull_min_norm <= tol;
  if (!r.dispersed) r.witness = renormalize(hull.point);
  return r;
}

// ---------------------------------------------------------------------------
// Bound functions
// ---------------------------------------------------------------------------

enum class TheoremFactor { Conservative = 1, Doubled = 2 };

inline double bound_f(const CouplingGraph& graph, const Configuration& x, int n) {
  detail::check_state(graph, x.dim(), x.size(), n + 1);
  double s = 0.0;
  for (const auto& e : graph.edges()) {
    const double c = x.point(e.i).dot(x.point(e.j));
    s += e.gain * (n - 1 - c) * (1 - c);
  }
  return 2.0 * s / (static_cast<double>(x.size()) * (n + 1));
}

inline double theorem_rhs(double K, int n, int N, TheoremFactor factor = TheoremFactor::Conservative) {
  if (n < 2) throw std::invalid_argument("theorem requires n >= 2");
  if (!(K > 0.0)) throw std::invalid_argument("theorem_rhs: K must be positive");
  if (N < 2) throw std::invalid_argument("theorem_rhs: N must be >= 2");
  const double c = std::cos(kPi / N);
  return static_cast<double>(factor) * K / (n + 1) * (n - 1 - c) * (1 - c);
}

// Angle-problem objective; the index arithmetic is cyclic, so `thetas` holds
// all N consecutive angles.
inline double objective_g(const std::vector<double>& thetas, double K, int n) {
  if (thetas.empty()) throw std::invalid_argument("objective_g: no angles");
  double s = 0.0;
  for (double t : thetas) s += (n - 1 - std::cos(t)) * (1 - std::cos(t));
  return 2.0 * K * s / (static_cast<double>(thetas.size()) * (n + 1));
}

inline double constraint_c(const std::vector<double>& thetas) {
  double s = 0.0;
  for (double t : thetas) s += t;
  return s - kPi;
}

inline double g1(double K, int n, int N) {
  if (N < 2) throw std::invalid_argument("g1: N must be >= 2");
  const double c = std::cos(kPi / N);
  return 2.0 * K / (n + 1) * (n - 1 - c) * (1 - c);
}

inline double g2(double K, int n, int N, double phi) {
  if (N < 2) throw std::invalid_argument("g2: N must be >= 2");
  if (!(phi > kPi / 2 && phi < kPi)) throw std::invalid_argument("g2: phi must lie in (pi/2, pi)");
  const double rest = std::cos((kPi - phi) / (N - 1));
  const double big = std::cos(phi);
  return 2.0 * K * (N - 1) / (N * (n + 1.0)) * (n - 1 - rest) * (1 - rest) +
         2.0 * K / (N * (n + 1.0)) * (n - 1 - big) * (1 - big);
}

// ---------------------------------------------------------------------------
// Lagrange stationarity of the angle problem
// ---------------------------------------------------------------------------

// Right-hand side constant of sin θ (n − 2cos θ) = −N(n+1)λ/(2K).
inline double lagrange_constant(double lambda, int n, double K, int N) {
  return -static_cast<double>(N) * (n + 1) * lambda / (2.0 * K);
}

inline double lagrange_curve(double theta, int n) {
  return std::sin(theta) * (n - 2.0 * std::cos(theta));
}

// Multiplier at which `theta` is stationary.
inline double lagrange_multiplier_for(double theta, int n, double K, int N) {
  return -2.0 * K * lagrange_curve(theta, n) / (static_cast<double>(N) * (n + 1));
}

inline std::vector<double> lagrange_residual(const std::vector<double>& thetas, double lambda,
                                             int n, double K, int N) {
  const double c = lagrange_constant(lambda, n, K, N);
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double t : thetas) {
    if (!(t >= 0.0 && t <= kPi)) throw std::invalid_argument("lagrange_residual: angle outside [0, pi]");
    out.push_back(lagrange_curve(t, n) - c);
  }
  return out;
}

// The curve sin θ (n − 2cos θ) is unimodal on [0, π]; its peak sits where
// 4cos²θ − n cos θ − 2 = 0, which is always at or beyond π/2.
inline double lagrange_peak_angle(int n) {
  return std::acos((n - std::sqrt(static_cast<double>(n) * n + 32.0)) / 8.0);
}

// All θ ∈ [0, π] solving the stationarity equation for a given λ, ascending.
// Two roots (one on each side of the peak) when the constant lies strictly
// between 0 and the peak height, one at the peak, the endpoints for λ = 0,
// and none otherwise.
inline std::vector<double> lagrange_roots(double lambda, int n, double K, int N) {
  const double c = lagrange_constant(lambda, n, K, N);
  const double peak = lagrange_peak_angle(n);
  const double height = lagrange_curve(peak, n);
  if (c < 0.0 || c > height) return {};
  if (c == 0.0) return {0.0, kPi};
  if (c == height) return {peak};

  auto bisect = [&](double lo, double hi, bool rising) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool below = lagrange_curve(mid, n) < c;
      if (below == rising) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(0.0, peak, true), bisect(peak, kPi, false)};
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

// Agent i (one-based) at phase 2πq(i−1)/N on the great circle in the (e₁,e₂)
// plane. An equilibrium of the homogeneous model on the cycle graph.
inline Configuration twisted_state(int N, int q, int n) {
  if (N < 3) throw std::invalid_argument("twisted_state: N must be >= 3");
  if (q < 1 || q >= N) throw std::invalid_argument("twisted_state: q must lie in [1, N)");
  std::vector<UnitVector> pts;
  for (int i = 0; i < N; ++i) pts.push_back(great_circle_point(2.0 * kPi * q * i / N, n));
  return Configuration(pts);
}

// ---------------------------------------------------------------------------
// Theorem verification
// ---------------------------------------------------------------------------

struct BoundReport {
  double f_value = 0.0;
  double theorem_rhs = 0.0;
  double omega_norm = 0.0;
  double beta = 0.0;
  double alpha_re = 0.0;
  bool premise_holds = false;
  bool conclusion_holds = false;

  double kahan_gap = 0.0;
  double residual = 0.0;  // max_i |ẋ_i| at x; verify_theorem does not require 0
  DispersedReport dispersion;
  bool beta_ge_f = false;
  bool kahan_holds = false;
  std::optional<bool> f_ge_rhs;  // evaluated only at dispersed configurations
  std::vector<std::string> violations;
  LinearizationReport linearization;
};

inline BoundReport verify_theorem(const LoheSystem& sys, const Configuration& x,
                                  TheoremFactor factor = TheoremFactor::Conservative) {
  const int n = sys.sphere_dim();
  const int N = sys.agent_count();
  BoundReport r;
  r.linearization = linearize(sys, x);
  r.beta = r.linearization.beta;
  r.alpha_re = r.linearization.alpha_re;
  r.kahan_gap = r.linearization.kahan_gap;
  r.omega_norm = r.linearization.omega_norm;
  r.f_value = bound_f(sys.graph(), x, n);
  r.theorem_rhs = theorem_rhs(sys.graph().min_gain(), n, N, factor);
  r.residual = residual(sys, x);
  r.dispersion = is_dispersed(x);

  r.premise_holds = r.omega_norm < r.theorem_rhs;
  r.conclusion_holds = r.alpha_re > 0.0;
  r.beta_ge_f = r.beta >= r.f_value - 1e-10 * std::max(1.0, std::abs(r.f_value));
  r.kahan_holds = r.kahan_gap <= r.omega_norm + 1e-8;
  if (r.dispersion.dispersed) r.f_ge_rhs = r.f_value >= r.theorem_rhs;

  if (!r.premise_holds) r.violations.emplace_back("theorem premise violated");
  if (!r.beta_ge_f) r.violations.emplace_back("beta < f(x)");
  if (!r.kahan_holds) r.violations.emplace_back("|beta - Re alpha| > omega_norm");
  if (r.f_ge_rhs && !*r.f_ge_rhs) r.violations.emplace_back("f(x) < theorem bound at dispersed configuration");
  if (r.premise_holds && r.dispersion.dispersed && !r.conclusion_holds)
    r.violations.emplace_back("premise holds at dispersed configuration but Re alpha <= 0");
  return r;
}

}  // namespace lohe
