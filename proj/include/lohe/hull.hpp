#pragma once

#include "lohe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lohe {

struct MinNormPoint {
  Vector point;                // minimum-norm point of conv{columns}
  std::vector<int> support;    // columns carrying positive weight
  std::vector<double> weights; // convex weights, aligned with support
  int iterations = 0;
  bool converged = false;
};

// Minimum-norm point of the convex hull of the columns of `points`, by Wolfe's
// algorithm: Frank–Wolfe major steps that add the most opposed column, and
// minor cycles that move to the affine minimizer of the active set, dropping
// columns whose weight would go negative. Terminates finitely; the cap guards
// against round-off cycling.
inline MinNormPoint min_norm_point(const Matrix& points, int max_iterations = 10000,
                                   double tol = 1e-12) {
  if (points.cols() < 1) throw std::invalid_argument("min_norm_point: no points");
  const Eigen::Index m = points.cols();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, points.col(i).squaredNorm());
  if (scale == 0.0) scale = 1.0;

  MinNormPoint res;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < m; ++i)
    if (points.col(i).squaredNorm() < points.col(start).squaredNorm()) start = i;
  std::vector<int> set{static_cast<int>(start)};
  std::vector<double> lambda{1.0};
  Vector x = points.col(start);

  auto combine = [&](const std::vector<double>& w) {
    Vector out = Vector::Zero(points.rows());
    for (std::size_t k = 0; k < set.size(); ++k) out += w[k] * points.col(set[k]);
    return out;
  };

  // argmin ‖Σ α_k s_k‖ subject to Σ α_k = 1.
  auto affine_minimizer = [&]() {
    const Eigen::Index s = static_cast<Eigen::Index>(set.size());
    Matrix kkt = Matrix::Zero(s + 1, s + 1);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b)
        kkt(a, b) = points.col(set[a]).dot(points.col(set[b]));
      kkt(a, s) = 1.0;
      kkt(s, a) = 1.0;
    }
    Vector rhs = Vector::Zero(s + 1);
    rhs[s] = 1.0;
    Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    std::vector<double> alpha(set.size());
    double total = 0.0;
    for (Eigen::Index a = 0; a < s; ++a) total += (alpha[a] = sol[a]);
    for (auto& v : alpha) v /= total;
    return alpha;
  };

  for (; res.iterations < max_iterations; ++res.iterations) {
    if (x.squaredNorm() <= tol * tol * scale) {
      res.converged = true;
      break;
    }
    Eigen::Index j = 0;
    (points.transpose() * x).minCoeff(&j);
    const double gap = x.squaredNorm() - x.dot(points.col(j));
    if (gap <= tol * scale || std::find(set.begin(), set.end(), j) != set.end()) {
      res.converged = true;
      break;
    }
    set.push_back(static_cast<int>(j));
    lambda.push_back(0.0);

    for (;;) {
      const auto alpha = affine_minimizer();
      const bool interior = std::all_of(alpha.begin(), alpha.end(),
                                        [](double a) { return a > 1e-14; });
      if (interior) {
        lambda = alpha;
        x = combine(lambda);
        break;
      }
      double theta = 1.0;
      for (std::size_t k = 0; k < set.size(); ++k)
        if (alpha[k] <= 1e-14 && lambda[k] - alpha[k] > 0.0)
          theta = std::min(theta, lambda[k] / (lambda[k] - alpha[k]));
      for (std::size_t k = 0; k < set.size(); ++k)
        lambda[k] = (1.0 - theta) * lambda[k] + theta * alpha[k];
      std::vector<int> kept_set;
      std::vector<double> kept_lambda;
      for (std::size_t k = 0; k < set.size(); ++k) {
        if (lambda[k] > 1e-14) {
          kept_set.push_back(set[k]);
          kept_lambda.push_back(lambda[k]);
        }
      }
      if (kept_set.empty()) {  // round-off collapse; keep the newest column
        kept_set.push_back(set.back());
        kept_lambda.push_back(1.0);
      }
      double total = 0.0;
      for (double v : kept_lambda) total += v;
      for (auto& v : kept_lambda) v /= total;
      set = std::move(kept_set);
      lambda = std::move(kept_lambda);
      x = combine(lambda);
      if (set.size() == 1) break;
    }
  }

  res.point = x;
  res.support = set;
  res.weights = lambda;
  return res;
}

}  // namespace lohe
