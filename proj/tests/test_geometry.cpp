#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lohe;
using lohe::testing::basis;

TEST(UnitVector, AcceptsUnitAndRejectsOthers) {
  EXPECT_NO_THROW(UnitVector(Vector::Unit(3, 0)));
  Vector almost = Vector::Unit(3, 1) * (1.0 + 1e-13);
  EXPECT_NO_THROW(UnitVector{almost});
  Vector off = Vector::Unit(3, 1) * (1.0 + 1e-9);
  EXPECT_THROW(UnitVector{off}, std::domain_error);
  EXPECT_THROW(UnitVector(Vector::Ones(1)), std::invalid_argument);
}

TEST(Renormalize, Examples) {
  const UnitVector u = renormalize(Vector{{3.0, 0.0, 4.0}});
  EXPECT_NEAR(u[0], 0.6, 1e-15);
  EXPECT_EQ(u[1], 0.0);
  EXPECT_NEAR(u[2], 0.8, 1e-15);

  const UnitVector again = renormalize(u.coords());
  EXPECT_LE((again.coords() - u.coords()).norm(), 1e-16);

  EXPECT_THROW(renormalize(Vector{{1e-16, 0.0, 0.0}}), std::domain_error);
  try {
    renormalize(Vector::Zero(3));
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate vector"), std::string::npos);
  }
}

TEST(ProjectTangent, Examples) {
  const UnitVector e1(basis(3, 0));
  EXPECT_LE(project_tangent(e1, basis(3, 0)).norm(), 1e-16);
  EXPECT_LE((project_tangent(e1, basis(3, 1)) - basis(3, 1)).norm(), 1e-16);

  const UnitVector diag = renormalize(Vector{{1.0, 1.0}});
  const Vector p = project_tangent(diag, basis(2, 0));
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], -0.5, 1e-15);

  EXPECT_THROW(project_tangent(e1, Vector::Ones(2)), std::invalid_argument);
}

TEST(ProjectTangent, OrthogonalAndIdempotent) {
  lohe::testing::Rng rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const UnitVector x = random_unit(rng, n);
    Vector v(n + 1);
    for (auto& c : v) c = normal(rng);
    const Vector p = project_tangent(x, v);
    EXPECT_LE(std::abs(p.dot(x.coords())), 1e-14 * (1 + v.norm()));
    EXPECT_LE((project_tangent(x, p) - p).norm(), 1e-14 * (1 + v.norm()));
  }
}

TEST(RandomUnit, NormDeterminismAndMean) {
  lohe::testing::Rng a(42), b(42);
  const UnitVector u = random_unit(a, 2);
  EXPECT_EQ(u.size(), 3);
  EXPECT_NEAR(u.coords().norm(), 1.0, 1e-12);
  EXPECT_EQ(u.coords(), random_unit(b, 2).coords());

  lohe::testing::Rng rng(7);
  Vector mean = Vector::Zero(3);
  for (int k = 0; k < 10000; ++k) mean += random_unit(rng, 2).coords();
  mean /= 10000.0;
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(mean[k]), 0.05);
}

TEST(RandomSkew, NormSkewnessDeterminism) {
  lohe::testing::Rng rng(1);
  EXPECT_EQ(random_skew(rng, 2, 0.0).entries().norm(), 0.0);
  const SkewMatrix s = random_skew(rng, 2, 1.0);
  EXPECT_EQ(s.size(), 3);
  EXPECT_NEAR(spectral_norm(s.entries()), 1.0, 1e-10);
  EXPECT_EQ((s.entries() + s.entries().transpose()).norm(), 0.0);

  lohe::testing::Rng a(9), b(9);
  EXPECT_EQ(random_skew(a, 4, 2.5).entries(), random_skew(b, 4, 2.5).entries());
  EXPECT_THROW(random_skew(rng, 2, -1.0), std::invalid_argument);
}

TEST(SkewMatrix, AntisymmetrizesInput) {
  const Matrix m{{0.0, 1.0}, {3.0, 0.0}};
  const SkewMatrix s(m);
  EXPECT_EQ(s.entries()(0, 1), -1.0);
  EXPECT_EQ(s.entries()(1, 0), 1.0);
  EXPECT_EQ(s.entries()(0, 0), 0.0);
}

TEST(SpectralNorm, Examples) {
  EXPECT_NEAR(spectral_norm(Matrix::Identity(3, 3)), 1.0, 1e-15);
  EXPECT_NEAR(spectral_norm(Vector{{2.0, -5.0}}.asDiagonal().toDenseMatrix()), 5.0, 1e-14);
  for (double w : {0.3, -2.0, 7.5}) {
    const Matrix s{{0.0, w}, {-w, 0.0}};
    EXPECT_NEAR(spectral_norm(s), std::abs(w), 1e-14);
  }
}

TEST(SpectralNorm, MatchesPowerOfGram) {
  lohe::testing::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = Matrix::Random(4 + trial % 5, 3 + trial % 4);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
    EXPECT_NEAR(spectral_norm(m), std::sqrt(es.eigenvalues().maxCoeff()), 1e-12);
  }
}

TEST(PairwiseAngle, Examples) {
  const UnitVector e1(basis(3, 0)), e2(basis(3, 1)), m1(Vector(-basis(3, 0)));
  EXPECT_EQ(pairwise_angle(e1, e1), 0.0);
  EXPECT_NEAR(pairwise_angle(e1, m1), kPi, 1e-15);
  EXPECT_NEAR(pairwise_angle(e1, e2), kPi / 2, 1e-15);

  const UnitVector tilt = renormalize(Vector{{1.0, 1e-9, 0.0}});
  const double a = pairwise_angle(e1, tilt);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 1e-7);
}

TEST(GreatCirclePoint, Examples) {
  EXPECT_LE((great_circle_point(0.0, 2).coords() - basis(3, 0)).norm(), 1e-15);
  EXPECT_LE((great_circle_point(kPi / 2, 2).coords() - basis(3, 1)).norm(), 1e-15);
  EXPECT_LE((great_circle_point(kPi, 3).coords() + basis(4, 0)).norm(), 1e-15);
}
