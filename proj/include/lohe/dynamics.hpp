/*
 * dynamics.hpp : vector fields of the Lohe model on (S^n)^N.
 *
 *   heterogeneous :  ẋ_i = Ω_i x_i + (I − x_i x_iᵀ) Σ_{j∈N_i} k_ij x_j
 *   homogeneous   :  ż_i = (I − z_i z_iᵀ) Σ_{j∈N_i} k_ij z_j  = −grad_i V(z)
 *   extension     :  v̇_i = Ω_i v_i + (I − û_i û_iᵀ) Σ k_ij û_j,  û = v/|v|
 *   Kuramoto (n=1):  θ̇_i = ω_i + Σ k_ij sin(θ_j − θ_i)
 *
 * V(z) = ½ Σ_{{i,j}∈E} k_ij |z_i − z_j|² is the disagreement function whose
 * sphere gradient is −(I − z_i z_iᵀ) Σ k_ij z_j, so the homogeneous model is
 * its gradient flow with no extra factor. Each undirected edge is counted once.
 *
 * States are stored column-wise: an (n+1)×N matrix, column i is agent i.
 */

#pragma once

#include "lohe/geometry.hpp"
#include "lohe/network.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lohe {

class Configuration {
 public:
  // Columns must already be unit vectors (within kUnitNormTol).
  explicit Configuration(Matrix points) : points_(std::move(points)) {
    if (points_.cols() < 1)
      throw std::invalid_argument("Configuration: need at least one agent");
    if (points_.rows() < 2)
      throw std::invalid_argument("Configuration: dimension must be >= 2");
    for (Eigen::Index i = 0; i < points_.cols(); ++i)
      if (std::abs(points_.col(i).norm() - 1.0) > kUnitNormTol)
        throw std::domain_error("Configuration: agent " + std::to_string(i + 1) +
                                " is not unit norm");
  }

  explicit Configuration(const std::vector<UnitVector>& points) {
    if (points.empty())
      throw std::invalid_argument("Configuration: need at least one agent");
    points_.resize(points.front().size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != points_.rows())
        throw std::invalid_argument("Configuration: mixed dimensions");
      points_.col(static_cast<Eigen::Index>(i)) = points[i].coords();
    }
  }

  // Renormalizes every column; throws on a degenerate column.
  static Configuration normalized(const Matrix& raw) {
    Matrix m(raw.rows(), raw.cols());
    for (Eigen::Index i = 0; i < raw.cols(); ++i)
      m.col(i) = renormalize(raw.col(i)).coords();
    return Configuration(std::move(m));
  }

  int size() const { return static_cast<int>(points_.cols()); }
  int dim() const { return static_cast<int>(points_.rows()); }
  int sphere_dim() const { return dim() - 1; }
  auto point(int i) const { return points_.col(i); }
  UnitVector unit(int i) const { return UnitVector(points_.col(i)); }
  const Matrix& matrix() const { return points_; }

 private:
  Matrix points_;
};

class FrequencySet {
 public:
  explicit FrequencySet(std::vector<SkewMatrix> omegas) : omegas_(std::move(omegas)) {
    if (omegas_.empty())
      throw std::invalid_argument("FrequencySet: need at least one matrix");
    for (const auto& o : omegas_)
      if (o.size() != omegas_.front().size())
        throw std::invalid_argument("FrequencySet: mixed matrix sizes");
  }

  static FrequencySet zero(int agents, int dim) {
    return FrequencySet(std::vector<SkewMatrix>(agents, SkewMatrix::zero(dim)));
  }

  int size() const { return static_cast<int>(omegas_.size()); }
  int dim() const { return static_cast<int>(omegas_.front().size()); }
  const SkewMatrix& operator[](int i) const { return omegas_.at(i); }
  const std::vector<SkewMatrix>& matrices() const { return omegas_; }

  bool is_zero() const {
    for (const auto& o : omegas_)
      if (!o.entries().isZero(0.0)) return false;
    return true;
  }

  // (Σ_i |Ω_i|₂²)^{1/2}
  double total_norm() const {
    double s = 0.0;
    for (const auto& o : omegas_) {
      const double v = spectral_norm(o.entries());
      s += v * v;
    }
    return std::sqrt(s);
  }

  FrequencySet scaled(double c) const {
    std::vector<SkewMatrix> out;
    out.reserve(omegas_.size());
    for (const auto& o : omegas_) out.push_back(o.scaled(c));
    return FrequencySet(std::move(out));
  }

 private:
  std::vector<SkewMatrix> omegas_;
};

class LoheSystem {
 public:
  LoheSystem(CouplingGraph graph, FrequencySet freqs)
      : graph_(std::move(graph)), freqs_(std::move(freqs)) {
    if (graph_.node_count() != freqs_.size())
      throw std::invalid_argument("LoheSystem: graph and frequency count differ");
    if (freqs_.dim() < 2)
      throw std::invalid_argument("LoheSystem: sphere dimension must be >= 1");
  }

  static LoheSystem homogeneous(CouplingGraph graph, int n) {
    const int agents = graph.node_count();
    return LoheSystem(std::move(graph), FrequencySet::zero(agents, n + 1));
  }

  const CouplingGraph& graph() const { return graph_; }
  const FrequencySet& freqs() const { return freqs_; }
  int sphere_dim() const { return freqs_.dim() - 1; }
  int dim() const { return freqs_.dim(); }
  int agent_count() const { return graph_.node_count(); }

 private:
  CouplingGraph graph_;
  FrequencySet freqs_;
};

// One tangent vector per agent, stored column-wise like Configuration.
struct TangentField {
  Matrix vectors;

  auto column(int i) const { return vectors.col(i); }
  int size() const { return static_cast<int>(vectors.cols()); }

  double max_norm() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < vectors.cols(); ++i)
      m = std::max(m, vectors.col(i).norm());
    return m;
  }
};

namespace detail {

inline void check_state(const CouplingGraph& g, Eigen::Index rows, Eigen::Index cols,
                        Eigen::Index dim) {
  if (cols != g.node_count())
    throw std::invalid_argument("state has " + std::to_string(cols) +
                                " agents, graph has " + std::to_string(g.node_count()));
  if (dim >= 0 && rows != dim)
    throw std::invalid_argument("state dimension mismatch");
}

// out.col(i) = (I − x_i x_iᵀ) Σ k_ij x_j, treating the columns of x as if unit.
inline void coupling_into(const CouplingGraph& g, const Eigen::Ref<const Matrix>& x,
                          Eigen::Ref<Matrix> out) {
  const Eigen::Index d = x.rows();
  Vector s(d);
  for (int i = 0; i < g.node_count(); ++i) {
    s.setZero();
    for (const auto& nb : g.neighbors(i)) s.noalias() += nb.gain * x.col(nb.index);
    out.col(i) = s - x.col(i) * x.col(i).dot(s);
  }
}

// Heterogeneous field evaluated on raw ambient columns (used by integrators at
// off-sphere Runge–Kutta stages).
inline void hetero_rhs_into(const LoheSystem& sys, const Eigen::Ref<const Matrix>& x,
                            Eigen::Ref<Matrix> out) {
  coupling_into(sys.graph(), x, out);
  if (sys.freqs().is_zero()) return;
  for (int i = 0; i < sys.agent_count(); ++i)
    out.col(i).noalias() += sys.freqs()[i].entries() * x.col(i);
}

}  // namespace detail

inline TangentField hetero_rhs(const LoheSystem& sys, const Configuration& x) {
  detail::check_state(sys.graph(), x.dim(), x.size(), sys.dim());
  TangentField f{Matrix(x.dim(), x.size())};
  detail::hetero_rhs_into(sys, x.matrix(), f.vectors);
  return f;
}

inline TangentField homo_rhs(const CouplingGraph& graph, const Configuration& z) {
  detail::check_state(graph, z.dim(), z.size(), -1);
  TangentField f{Matrix(z.dim(), z.size())};
  detail::coupling_into(graph, z.matrix(), f.vectors);
  return f;
}

// Drift part (Ω_i x_i)_i of the heterogeneous field.
inline TangentField drift(const LoheSystem& sys, const Configuration& x) {
  detail::check_state(sys.graph(), x.dim(), x.size(), sys.dim());
  TangentField f{Matrix(x.dim(), x.size())};
  for (int i = 0; i < x.size(); ++i)
    f.vectors.col(i) = sys.freqs()[i].entries() * x.point(i);
  return f;
}

inline double disagreement(const CouplingGraph& graph, const Configuration& z) {
  detail::check_state(graph, z.dim(), z.size(), -1);
  double v = 0.0;
  for (const auto& e : graph.edges())
    v += e.gain * (z.point(e.i) - z.point(e.j)).squaredNorm();
  return 0.5 * v;
}

inline TangentField disagreement_gradient(const CouplingGraph& graph,
                                          const Configuration& z) {
  TangentField f = homo_rhs(graph, z);
  f.vectors = -f.vectors;
  return f;
}

// Max over agents of |ẋ_i|.
inline double residual(const LoheSystem& sys, const Configuration& x) {
  return hetero_rhs(sys, x).max_norm();
}

inline Matrix extended_rhs(const LoheSystem& sys, const Matrix& v) {
  detail::check_state(sys.graph(), v.rows(), v.cols(), sys.dim());
  Matrix u(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const double norm = v.col(i).norm();
    if (!(norm > 1e-8)) throw std::domain_error("extension undefined at origin");
    u.col(i) = v.col(i) / norm;
  }
  Matrix out(v.rows(), v.cols());
  detail::coupling_into(sys.graph(), u, out);
  for (int i = 0; i < sys.agent_count(); ++i)
    out.col(i).noalias() += sys.freqs()[i].entries() * v.col(i);
  return out;
}

inline Vector kuramoto_rhs(const Vector& omega, const CouplingGraph& graph,
                           const Vector& theta) {
  if (omega.size() != graph.node_count() || theta.size() != graph.node_count())
    throw std::invalid_argument("kuramoto_rhs: size mismatch");
  Vector out = omega;
  for (int i = 0; i < graph.node_count(); ++i)
    for (const auto& nb : graph.neighbors(i))
      out[i] += nb.gain * std::sin(theta[nb.index] - theta[i]);
  return out;
}

// Polar chart on S¹: θ_i = atan2(x_i,2, x_i,1).
inline Vector circle_angles(const Configuration& x) {
  if (x.dim() != 2) throw std::invalid_argument("circle_angles: requires n = 1");
  Vector theta(x.size());
  for (int i = 0; i < x.size(); ++i) theta[i] = std::atan2(x.point(i)[1], x.point(i)[0]);
  return theta;
}

inline Configuration circle_configuration(const Vector& theta) {
  Matrix m(2, theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    m(0, i) = std::cos(theta[i]);
    m(1, i) = std::sin(theta[i]);
  }
  return Configuration::normalized(m);
}

// Scalar Kuramoto frequencies ω_i = ⟨e₂, Ω_i e₁⟩ under the chart above.
inline Vector kuramoto_frequencies(const FrequencySet& freqs) {
  if (freqs.dim() != 2)
    throw std::invalid_argument("kuramoto_frequencies: requires n = 1");
  Vector omega(freqs.size());
  for (int i = 0; i < freqs.size(); ++i) omega[i] = freqs[i].entries()(1, 0);
  return omega;
}

}  // namespace lohe
