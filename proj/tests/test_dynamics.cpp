#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lohe;
using lohe::testing::basis;
using lohe::testing::Rng;

namespace {

Configuration pair_of(const Vector& a, const Vector& b) {
  return Configuration(std::vector<UnitVector>{UnitVector(a), UnitVector(b)});
}

}  // namespace

TEST(HeteroRhs, SynchronizedWithoutDriftIsZero) {
  const Configuration x(std::vector<UnitVector>(5, great_circle_point(0.3, 2)));
  const auto sys = LoheSystem::homogeneous(complete_graph(5, 1.0), 2);
  EXPECT_LE(hetero_rhs(sys, x).max_norm(), 1e-15);
}

TEST(HeteroRhs, SynchronizedWithDriftIsRotation) {
  Rng rng(2);
  const Configuration x(std::vector<UnitVector>(4, random_unit(rng, 3)));
  const LoheSystem sys(cycle_graph(4, 1.5), lohe::testing::random_frequencies(rng, 4, 3, 0.7));
  const TangentField f = hetero_rhs(sys, x);
  for (int i = 0; i < 4; ++i)
    EXPECT_LE((f.column(i) - sys.freqs()[i].entries() * x.point(i)).norm(), 1e-15);
}

TEST(HeteroRhs, OrthogonalPairByHand) {
  const auto sys = LoheSystem::homogeneous(path_graph(2, 1.0), 2);
  const TangentField f = hetero_rhs(sys, pair_of(basis(3, 0), basis(3, 1)));
  EXPECT_LE((f.column(0) - basis(3, 1)).norm(), 1e-16);
  EXPECT_LE((f.column(1) - basis(3, 0)).norm(), 1e-16);
}

TEST(HeteroRhs, DimensionMismatchThrows) {
  const auto sys = LoheSystem::homogeneous(path_graph(3, 1.0), 2);
  Rng rng(1);
  EXPECT_THROW(hetero_rhs(sys, lohe::testing::random_configuration(rng, 3, 3)), std::invalid_argument);
  EXPECT_THROW(hetero_rhs(sys, lohe::testing::random_configuration(rng, 4, 2)), std::invalid_argument);
}

TEST(HeteroRhs, TangencyProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int agents = 1 + trial % 10, n = 1 + trial % 4;
    const CouplingGraph g = agents == 1 ? from_edge_list(1, {}) : lohe::testing::random_graph(rng, agents);
    const LoheSystem sys(g, lohe::testing::random_frequencies(rng, agents, n, 1.0));
    const Configuration x = lohe::testing::random_configuration(rng, agents, n);
    const TangentField f = hetero_rhs(sys, x);
    for (int i = 0; i < agents; ++i) EXPECT_LE(std::abs(f.column(i).dot(x.point(i))), 1e-12);
  }
}

TEST(HeteroRhs, DriftDecomposition) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int agents = 2 + trial % 8, n = 1 + trial % 4;
    const LoheSystem sys(lohe::testing::random_graph(rng, agents),
                         lohe::testing::random_frequencies(rng, agents, n, 2.0));
    const Configuration x = lohe::testing::random_configuration(rng, agents, n);
    const Matrix diff = hetero_rhs(sys, x).vectors - homo_rhs(sys.graph(), x).vectors;
    EXPECT_LE((diff - drift(sys, x).vectors).cwiseAbs().maxCoeff(), 1e-15);
    for (int i = 0; i < agents; ++i)
      EXPECT_LE((drift(sys, x).column(i) - sys.freqs()[i].entries() * x.point(i)).norm(), 1e-15);
  }
}

TEST(HomoRhs, EqualsHeteroWithZeroFrequencies) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int agents = 2 + trial % 8, n = 1 + trial % 4;
    const auto g = lohe::testing::random_graph(rng, agents);
    const Configuration x = lohe::testing::random_configuration(rng, agents, n);
    EXPECT_EQ(homo_rhs(g, x).vectors, hetero_rhs(LoheSystem::homogeneous(g, n), x).vectors);
  }
}

TEST(HomoRhs, Equilibria) {
  EXPECT_LE(homo_rhs(path_graph(2, 1.0), pair_of(basis(3, 0), Vector(-basis(3, 0)))).max_norm(), 1e-16);
  for (int N = 3; N <= 12; ++N)
    for (int q = 1; q < N; ++q)
      EXPECT_LE(homo_rhs(cycle_graph(N, 1.3), twisted_state(N, q, 2)).max_norm(), 1e-13) << N << "," << q;
}

TEST(Disagreement, Examples) {
  const Configuration synced(std::vector<UnitVector>(4, great_circle_point(1.0, 3)));
  EXPECT_EQ(disagreement(complete_graph(4, 1.0), synced), 0.0);
  // One half per undirected edge: the normalization under which homo_rhs = −grad V.
  EXPECT_NEAR(disagreement(path_graph(2, 1.0), pair_of(basis(3, 0), Vector(-basis(3, 0)))), 2.0, 1e-15);
  EXPECT_NEAR(disagreement(path_graph(2, 2.0), pair_of(basis(3, 0), basis(3, 1))), 2.0, 1e-15);
}

TEST(Disagreement, NonnegativeAndZeroOnlyAtSync) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int agents = 2 + trial % 8;
    const auto g = lohe::testing::random_graph(rng, agents);
    const Configuration x = lohe::testing::random_configuration(rng, agents, 1 + trial % 3);
    EXPECT_GT(disagreement(g, x), 0.0);
  }
}

TEST(DisagreementGradient, ZeroAtSyncAndAntipodal) {
  const Configuration synced(std::vector<UnitVector>(3, great_circle_point(0.0, 2)));
  EXPECT_LE(disagreement_gradient(path_graph(3, 1.0), synced).max_norm(), 1e-16);
  EXPECT_LE(disagreement_gradient(path_graph(2, 1.0), pair_of(basis(2, 0), Vector(-basis(2, 0)))).max_norm(),
            1e-16);
}

TEST(DisagreementGradient, GradientFlowIdentity) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int agents = 2 + trial % 9, n = 1 + trial % 4;
    const auto g = lohe::testing::random_graph(rng, agents);
    const Configuration x = lohe::testing::random_configuration(rng, agents, n);
    const Matrix sum = homo_rhs(g, x).vectors + disagreement_gradient(g, x).vectors;
    EXPECT_LE(sum.cwiseAbs().maxCoeff(), 1e-12);
  }
}

// Central difference of V along the geodesic x_i(t) = cos(t)x_i + sin(t)u.
TEST(DisagreementGradient, FiniteDifferenceOracle) {
  Rng rng(8);
  std::normal_distribution<double> normal;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const int agents = 2 + trial % 9, n = 1 + trial % 4, d = n + 1;
    const auto g = lohe::testing::random_graph(rng, agents);
    const Configuration x = lohe::testing::random_configuration(rng, agents, n);
    const TangentField grad = disagreement_gradient(g, x);
    const int i = trial % agents;
    Vector u(d);
    for (auto& c : u) c = normal(rng);
    u -= u.dot(x.point(i)) * Vector(x.point(i));
    u.normalize();
    auto moved = [&](double t) {
      Matrix m = x.matrix();
      m.col(i) = std::cos(t) * Vector(x.point(i)) + std::sin(t) * u;
      return Configuration::normalized(m);
    };
    const double fd = (disagreement(g, moved(h)) - disagreement(g, moved(-h))) / (2 * h);
    const double exact = grad.column(i).dot(u);
    EXPECT_LE(std::abs(fd - exact), 1e-6 * std::max(1.0, grad.column(i).norm()));
  }
}

TEST(ExtendedRhs, RestrictsToHeteroRhs) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int agents = 2 + trial % 6, n = 1 + trial % 3;
    const LoheSystem sys(lohe::testing::random_graph(rng, agents),
                         lohe::testing::random_frequencies(rng, agents, n, 1.0));
    const Configuration x = lohe::testing::random_configuration(rng, agents, n);
    EXPECT_LE((extended_rhs(sys, x.matrix()) - hetero_rhs(sys, x).vectors).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ExtendedRhs, ScalingDoublesDriftOnly) {
  Rng rng(10);
  const LoheSystem sys(cycle_graph(5, 1.0), lohe::testing::random_frequencies(rng, 5, 2, 1.0));
  const Configuration x = lohe::testing::random_configuration(rng, 5, 2);
  const Matrix out = extended_rhs(sys, 2.0 * x.matrix());
  const TangentField coupling = homo_rhs(sys.graph(), x);
  for (int i = 0; i < 5; ++i) {
    const Vector expect = 2.0 * sys.freqs()[i].entries() * x.point(i) + Vector(coupling.column(i));
    EXPECT_LE((out.col(i) - expect).norm(), 1e-14);
  }
}

TEST(ExtendedRhs, NormInvarianceAndOriginError) {
  Rng rng(11);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int agents = 2 + trial % 6, n = 1 + trial % 3;
    const LoheSystem sys(lohe::testing::random_graph(rng, agents),
                         lohe::testing::random_frequencies(rng, agents, n, 1.0));
    Matrix v = lohe::testing::random_configuration(rng, agents, n).matrix();
    for (int i = 0; i < agents; ++i) v.col(i) *= scale(rng);
    const Matrix out = extended_rhs(sys, v);
    for (int i = 0; i < agents; ++i) EXPECT_LE(std::abs(out.col(i).dot(v.col(i))), 1e-10);
  }
  const auto sys = LoheSystem::homogeneous(path_graph(2, 1.0), 2);
  Matrix v = Matrix::Zero(3, 2);
  v(0, 0) = 1.0;
  try {
    extended_rhs(sys, v);
    ADD_FAILURE() << "expected an error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("extension undefined at origin"), std::string::npos);
  }
}

TEST(KuramotoRhs, Examples) {
  const auto g = path_graph(2, 1.0);
  EXPECT_LE(kuramoto_rhs(Vector::Zero(2), g, Vector::Constant(2, 0.4)).norm(), 1e-16);
  const Vector r = kuramoto_rhs(Vector::Zero(2), g, Vector{{0.0, kPi / 2}});
  EXPECT_NEAR(r[0], 1.0, 1e-15);
  EXPECT_NEAR(r[1], -1.0, 1e-15);
}

TEST(KuramotoRhs, MatchesCartesianFieldUnderChart) {
  Rng rng(12);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const int agents = 2 + trial % 8;
    const LoheSystem sys(lohe::testing::random_graph(rng, agents),
                         lohe::testing::random_frequencies(rng, agents, 1, 1.0));
    Vector theta(agents);
    for (auto& t : theta) t = angle(rng);
    const Configuration x = circle_configuration(theta);
    const TangentField f = hetero_rhs(sys, x);
    const Vector polar = kuramoto_rhs(kuramoto_frequencies(sys.freqs()), sys.graph(), theta);
    for (int i = 0; i < agents; ++i) {
      const Vector tangent{{-std::sin(theta[i]), std::cos(theta[i])}};
      EXPECT_LE((Vector(f.column(i)) - polar[i] * tangent).norm(), 1e-10);
    }
    EXPECT_LE((circle_angles(x) - theta).cwiseAbs().maxCoeff(), 1e-14);
  }
}
