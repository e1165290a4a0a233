/*
 * geometry.hpp : primitives on the unit sphere S^n ⊂ R^{n+1} and on so(n+1).
 *
 * Every other header builds on the two strong types defined here:
 *
 *   UnitVector  : a point of S^n, norm 1 within 1e-12
 *   SkewMatrix  : an (n+1)×(n+1) matrix with Mᵀ = −M exactly
 *
 * Vectors and matrices are Eigen dynamic-size doubles throughout; the sphere
 * dimension n is a runtime quantity.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace lohe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kDegenerateNorm = 1e-14;

class UnitVector {
 public:
  // Validates |v| = 1 within kUnitNormTol; use renormalize() for arbitrary v.
  explicit UnitVector(Vector v) : coords_(std::move(v)) {
    if (coords_.size() < 2)
      throw std::invalid_argument("UnitVector: dimension must be at least 2");
    if (std::abs(coords_.norm() - 1.0) > kUnitNormTol)
      throw std::domain_error("UnitVector: input is not unit norm");
  }

  const Vector& coords() const { return coords_; }
  Eigen::Index size() const { return coords_.size(); }
  int sphere_dim() const { return static_cast<int>(coords_.size()) - 1; }
  double operator[](Eigen::Index i) const { return coords_[i]; }

 private:
  struct Trusted {};
  UnitVector(Vector v, Trusted) : coords_(std::move(v)) {}
  friend UnitVector renormalize(const Vector& v);

  Vector coords_;
};

inline UnitVector renormalize(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > kDegenerateNorm))
    throw std::domain_error("renormalize: degenerate vector");
  return UnitVector(v / norm, UnitVector::Trusted{});
}

class SkewMatrix {
 public:
  // Antisymmetrizes the input: (M − Mᵀ)/2. Entry (j,i) is the exact negation
  // of entry (i,j) because fl(a − b) = −fl(b − a).
  explicit SkewMatrix(const Matrix& m) : entries_(m.rows(), m.cols()) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("SkewMatrix: matrix must be square");
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        entries_(i, j) = 0.5 * (m(i, j) - m(j, i));
  }

  static SkewMatrix zero(Eigen::Index dim) {
    return SkewMatrix(Matrix::Zero(dim, dim));
  }

  const Matrix& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

  SkewMatrix scaled(double c) const {
    SkewMatrix out = *this;
    out.entries_ *= c;
    return out;
  }

 private:
  Matrix entries_;
};

// Largest singular value.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite())
    throw std::domain_error("spectral_norm: matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// (I − x xᵀ) v
inline Vector project_tangent(const UnitVector& x, const Vector& v) {
  if (v.size() != x.size())
    throw std::invalid_argument("project_tangent: dimension mismatch");
  const Vector& c = x.coords();
  return v - c * c.dot(v);
}

inline double pairwise_angle(const UnitVector& x, const UnitVector& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pairwise_angle: dimension mismatch");
  return std::acos(std::clamp(x.coords().dot(y.coords()), -1.0, 1.0));
}

// (cos φ, sin φ, 0, …, 0) ∈ R^{n+1}
inline UnitVector great_circle_point(double phase, int n) {
  if (n < 1) throw std::invalid_argument("great_circle_point: n must be >= 1");
  Vector v = Vector::Zero(n + 1);
  v[0] = std::cos(phase);
  v[1] = std::sin(phase);
  return renormalize(v);
}

// Uniform on S^n via a normalized standard Gaussian.
template <class Rng>
UnitVector random_unit(Rng& rng, int n) {
  if (n < 1) throw std::invalid_argument("random_unit: n must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n + 1);
  for (;;) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    if (v.norm() > 1e-8) return renormalize(v);
  }
}

// Skew matrix with spectral norm target_norm, drawn by antisymmetrizing a
// Gaussian matrix and rescaling.
template <class Rng>
SkewMatrix random_skew(Rng& rng, int n, double target_norm) {
  if (n < 1) throw std::invalid_argument("random_skew: n must be >= 1");
  if (!(target_norm >= 0.0))
    throw std::invalid_argument("random_skew: target_norm must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n + 1, n + 1);
  for (;;) {
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
    SkewMatrix s(g);
    const double norm = spectral_norm(s.entries());
    if (norm > 1e-8) return s.scaled(target_norm / norm);
  }
}

}  // namespace lohe
