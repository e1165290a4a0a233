/*
 * eigensolver.hpp : dense real nonsymmetric eigenvalues.
 *
 * Pipeline: radix-2 balancing → Householder reduction to upper Hessenberg
 * form → Francis double-shift QR iteration with exceptional shifts. Only
 * eigenvalues are produced; the spectral abscissa is all the stability
 * analysis needs.
 *
 * Balancing and the QR sweep follow the classic EISPACK balanc/hqr logic,
 * written over 0-based Eigen storage.
 */

#pragma once

#include "lohe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lohe {

class EigenNonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Similarity scaling by powers of 2 so that row and column norms are comparable.
inline void balance(Matrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        a.row(i) *= g;
        a.col(i) *= f;
      }
    }
  }
}

inline void hessenberg_reduce(Matrix& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Vector v = a.block(k + 1, k, m, 1);
    const double alpha = v.norm();
    if (alpha == 0.0) continue;
    const double beta = v[0] >= 0.0 ? -alpha : alpha;
    v[0] -= beta;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H ← (I − 2vvᵀ) H (I − 2vvᵀ) on the trailing block.
    auto rows = a.block(k + 1, k, m, n - k);
    rows -= 2.0 * v * (v.transpose() * rows);
    auto cols = a.block(0, k + 1, n, m);
    cols -= 2.0 * (cols * v) * v.transpose();
    a(k + 1, k) = beta;
    a.block(k + 2, k, m - 1, 1).setZero();
  }
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
inline std::vector<std::complex<double>> hessenberg_qr(Matrix& h, int max_its) {
  const int n = static_cast<int>(h.rows());
  std::vector<double> wr(n), wi(n);
  // 1-based accessor keeps the sweep readable next to its reference form.
  auto a = [&h](int i, int j) -> double& { return h(i - 1, j - 1); };

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));

  int nn = n;
  double t = 0.0;
  double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, z = 0;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        wr[nn - 1] = x + t;
        wi[nn - 1] = 0.0;
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 2] = wr[nn - 1] = x + z;
            if (z != 0.0) wr[nn - 1] = x - w / z;
            wi[nn - 2] = wi[nn - 1] = 0.0;
          } else {
            wr[nn - 2] = wr[nn - 1] = x + p;
            wi[nn - 2] = -z;
            wi[nn - 1] = z;
          }
          nn -= 2;
        } else {
          if (its == max_its)
            throw EigenNonConvergence("eigenvalues: QR iteration did not converge");
          if (its > 0 && its % 10 == 0) {
            t += x;
            for (int i = 1; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (nn >= 1 && l < nn - 1);
  }

  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

}  // namespace detail

// Full spectrum, sorted by descending real part (ties: descending imaginary).
inline std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw std::domain_error("eigenvalues: non-finite entries");
  if (m.rows() == 0) return {};
  Matrix h = m;
  detail::balance(h);
  detail::hessenberg_reduce(h);
  auto values = detail::hessenberg_qr(h, 60);
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return values;
}

inline double spectral_abscissa(const Matrix& m) {
  const auto values = eigenvalues(m);
  if (values.empty()) throw std::invalid_argument("spectral_abscissa: empty matrix");
  return values.front().real();
}

// Largest eigenvalue of a symmetric matrix (the lower triangle is used).
inline double max_symmetric_eigenvalue(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("max_symmetric_eigenvalue: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw EigenNonConvergence("max_symmetric_eigenvalue: solver failed");
  return solver.eigenvalues()(m.rows() - 1);
}

}  // namespace lohe
