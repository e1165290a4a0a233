/*
 * spectral.hpp : linearization of the Lohe model at a configuration.
 *
 * In ambient coordinates R^{N(n+1)} with P_i = I − x_i x_iᵀ:
 *
 *   B_ii = −(Σ_{j∈N_i} k_ij ⟨x_j, x_i⟩) P_i
 *   B_ij = k_ij P_i P_j      if {i,j} ∈ E,   0 otherwise
 *   A    = blockdiag(Ω_1, …, Ω_N) + B
 *
 * B is symmetric, so β = λ_max(B); A is a skew perturbation of B and
 * |β − max Re σ(A)| ≤ |A − B|₂ ≤ (Σ|Ω_i|₂²)^{1/2}.
 */

#pragma once

#include "lohe/dynamics.hpp"
#include "lohe/eigensolver.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace lohe {

inline Matrix assemble_B(const CouplingGraph& graph, const Configuration& x) {
  detail::check_state(graph, x.dim(), x.size(), -1);
  const int d = x.dim();
  const int agents = x.size();
  Matrix b = Matrix::Zero(d * agents, d * agents);
  std::vector<Matrix> proj(agents);
  for (int i = 0; i < agents; ++i)
    proj[i] = Matrix::Identity(d, d) - x.point(i) * x.point(i).transpose();

  for (int i = 0; i < agents; ++i) {
    double weight = 0.0;
    for (const auto& nb : graph.neighbors(i)) weight += nb.gain * x.point(nb.index).dot(x.point(i));
    b.block(i * d, i * d, d, d) = -weight * proj[i];
  }
  for (const auto& e : graph.edges()) {
    const Matrix block = e.gain * proj[e.i] * proj[e.j];
    b.block(e.i * d, e.j * d, d, d) = block;
    b.block(e.j * d, e.i * d, d, d) = block.transpose();
  }
  return b;
}

inline Matrix block_diagonal(const FrequencySet& freqs) {
  const int d = freqs.dim();
  Matrix out = Matrix::Zero(d * freqs.size(), d * freqs.size());
  for (int i = 0; i < freqs.size(); ++i) out.block(i * d, i * d, d, d) = freqs[i].entries();
  return out;
}

inline Matrix assemble_A(const LoheSystem& sys, const Configuration& x) {
  detail::check_state(sys.graph(), x.dim(), x.size(), sys.dim());
  Matrix a = assemble_B(sys.graph(), x);
  const int d = x.dim();
  for (int i = 0; i < x.size(); ++i) a.block(i * d, i * d, d, d) += sys.freqs()[i].entries();
  return a;
}

// Central differences of extended_rhs at x, all N(n+1) ambient directions.
inline Matrix fd_jacobian(const LoheSystem& sys, const Configuration& x, double h = 1e-5) {
  if (!(h >= 1e-7 && h <= 1e-4)) throw std::invalid_argument("fd_jacobian: h must lie in [1e-7, 1e-4]");
  const int d = x.dim();
  const int dim = d * x.size();
  Matrix j(dim, dim);
  Matrix plus = x.matrix();
  Matrix minus = x.matrix();
  for (int c = 0; c < dim; ++c) {
    const int agent = c / d;
    const int coord = c % d;
    plus(coord, agent) += h;
    minus(coord, agent) -= h;
    const Matrix diff = (extended_rhs(sys, plus) - extended_rhs(sys, minus)) / (2.0 * h);
    j.col(c) = Eigen::Map<const Vector>(diff.data(), dim);
    plus(coord, agent) = x.matrix()(coord, agent);
    minus(coord, agent) = x.matrix()(coord, agent);
  }
  return j;
}

// Orthonormal basis of T_x(S^n)^N, as an N(n+1) × Nn matrix.
inline Matrix tangent_basis(const Configuration& x) {
  const int d = x.dim();
  const int n = d - 1;
  Matrix q = Matrix::Zero(d * x.size(), n * x.size());
  for (int i = 0; i < x.size(); ++i) {
    Matrix seed(d, 1);
    seed.col(0) = x.point(i);
    Eigen::HouseholderQR<Matrix> qr(seed);
    const Matrix full = qr.householderQ() * Matrix::Identity(d, d);
    q.block(i * d, i * n, d, n) = full.rightCols(n);
  }
  return q;
}

// blockdiag(P_1, …, P_N)
inline Matrix tangent_projector(const Configuration& x) {
  const int d = x.dim();
  Matrix p = Matrix::Zero(d * x.size(), d * x.size());
  for (int i = 0; i < x.size(); ++i)
    p.block(i * d, i * d, d, d) = Matrix::Identity(d, d) - x.point(i) * x.point(i).transpose();
  return p;
}

// Qᵀ M Q: the operator restricted to, and read back on, the tangent bundle.
inline Matrix tangent_restriction(const Matrix& m, const Configuration& x) {
  const Matrix q = tangent_basis(x);
  return q.transpose() * m * q;
}

struct KahanCheck {
  double gap = 0.0;    // |λ_max(B) − max Re σ(B + Y)|
  double bound = 0.0;  // |Y|₂
  bool holds = false;
};

inline KahanCheck kahan_bound(const Matrix& b, const Matrix& y) {
  if (b.rows() != b.cols() || y.rows() != y.cols() || b.rows() != y.rows())
    throw std::invalid_argument("kahan_bound: size mismatch");
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("kahan_bound: B is not symmetric");
  if ((y + y.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("kahan_bound: Y is not skew-symmetric");
  KahanCheck out;
  out.gap = std::abs(max_symmetric_eigenvalue(b) - spectral_abscissa(b + y));
  out.bound = spectral_norm(y);
  out.holds = out.gap <= out.bound + 1e-8;
  return out;
}

struct LinearizationReport {
  Matrix B;
  Matrix A;
  double beta = 0.0;
  double alpha_re = 0.0;
  std::vector<std::complex<double>> spectrum_A;
  double kahan_gap = 0.0;
  double omega_norm = 0.0;
};

inline LinearizationReport linearize(const LoheSystem& sys, const Configuration& x) {
  LinearizationReport r;
  r.B = assemble_B(sys.graph(), x);
  r.A = assemble_A(sys, x);
  r.beta = max_symmetric_eigenvalue(r.B);
  r.spectrum_A = eigenvalues(r.A);
  r.alpha_re = r.spectrum_A.front().real();
  r.kahan_gap = std::abs(r.beta - r.alpha_re);
  r.omega_norm = sys.freqs().total_norm();
  return r;
}

}  // namespace lohe
