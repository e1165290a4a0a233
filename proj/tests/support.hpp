#pragma once

#include "lohe/lohe.hpp"

#include <random>
#include <vector>

namespace lohe::testing {

using Rng = std::mt19937_64;

// Random spanning tree plus extra edges; gains in [0.5, 2].
inline CouplingGraph random_graph(Rng& rng, int agents, double extra_density = 0.3) {
  std::uniform_real_distribution<double> gain(0.5, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<WeightedPair> pairs;
  std::vector<std::vector<bool>> used(agents, std::vector<bool>(agents, false));
  for (int i = 1; i < agents; ++i) {
    const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
    pairs.push_back({parent + 1, i + 1, gain(rng)});
    used[parent][i] = used[i][parent] = true;
  }
  for (int i = 0; i < agents; ++i)
    for (int j = i + 1; j < agents; ++j)
      if (!used[i][j] && coin(rng) < extra_density) pairs.push_back({i + 1, j + 1, gain(rng)});
  return from_edge_list(agents, pairs);
}

inline Configuration random_configuration(Rng& rng, int agents, int n) {
  std::vector<UnitVector> pts;
  for (int i = 0; i < agents; ++i) pts.push_back(random_unit(rng, n));
  return Configuration(pts);
}

// Each Ω_i has spectral norm `each`.
inline FrequencySet random_frequencies(Rng& rng, int agents, int n, double each) {
  std::vector<SkewMatrix> mats;
  for (int i = 0; i < agents; ++i) mats.push_back(random_skew(rng, n, each));
  return FrequencySet(std::move(mats));
}

// Joint rescale to (Σ|Ω_i|₂²)^{1/2} = total.
inline FrequencySet random_frequencies_total(Rng& rng, int agents, int n, double total) {
  FrequencySet f = random_frequencies(rng, agents, n, 1.0);
  return f.scaled(total / f.total_norm());
}

// Random tangent vector stacked agent-major: (u_1; …; u_N), u_i ⟂ x_i.
inline Vector random_tangent(Rng& rng, const Configuration& x) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = x.dim();
  Vector u(d * x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector v(d);
    for (int k = 0; k < d; ++k) v[k] = normal(rng);
    v -= x.point(i).dot(v) * Vector(x.point(i));
    u.segment(i * d, d) = v;
  }
  return u;
}

// Ω_i = a(u vᵀ − v uᵀ) with u, v ⟂ x_i, so Ω_i x_i = 0 and every equilibrium of
// the homogeneous model stays an equilibrium. Needs n ≥ 2.
inline FrequencySet stabilizing_frequencies(Rng& rng, const Configuration& x, double each) {
  std::vector<SkewMatrix> mats;
  for (int i = 0; i < x.size(); ++i) {
    const Vector u = random_tangent(rng, Configuration(std::vector<UnitVector>{x.unit(i)})).normalized();
    Vector v = random_tangent(rng, Configuration(std::vector<UnitVector>{x.unit(i)}));
    v -= v.dot(u) * u;
    v.normalize();
    mats.emplace_back(Matrix(each * (u * v.transpose() - v * u.transpose())));
  }
  return FrequencySet(std::move(mats));
}

inline Vector stack(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unstack(const Vector& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, v.size() / d);
}

inline Vector basis(int d, int k) {
  Vector e = Vector::Zero(d);
  e[k] = 1.0;
  return e;
}

}  // namespace lohe::testing
