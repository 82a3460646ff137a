// Copyright 2026 The Microsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "microsynth/dpmech.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "microsynth/rng.h"

namespace microsynth {
namespace {

// Mass of {|v_1| > c} under exp(lambda v_1^2) on the sphere of R^3. There
// v_1 is uniform on [-1, 1] before tilting, so Simpson's rule on the
// tilted density suffices.
double TiltedCapMass(double lambda, double c) {
  auto integrate = [lambda](double lo, double hi) {
    const int steps = 20000;
    const double h = (hi - lo) / steps;
    double total = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double u = lo + i * h;
      const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
      total += w * std::exp(lambda * (u * u - 1));
    }
    return total * h / 3;
  };
  return integrate(c, 1.0) / integrate(0.0, 1.0);
}

TEST(LaplaceTest, InverseCdf) {
  EXPECT_EQ(LaplaceInverseCdf(0.5, 3.0), 0.0);
  EXPECT_NEAR(LaplaceInverseCdf(0.75, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(LaplaceInverseCdf(0.25, 2.0), -2 * std::log(2.0), 1e-15);
}

TEST(LaplaceTest, VarianceAndMedian) {
  RandomStream rng(1, "laplace");
  const int q = 1000000;
  const Vector x = *LaplaceVector(1.0, q, rng);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (q - 1);
  EXPECT_NEAR(var, 2.0, 0.02);
  std::vector<double> v(x.data(), x.data() + q);
  std::nth_element(v.begin(), v.begin() + q / 2, v.end());
  // Density at zero is 1/2, so the median has standard error 1/sqrt(q).
  EXPECT_NEAR(v[q / 2], 0.0, 4.0 / std::sqrt(static_cast<double>(q)));
}

TEST(LaplaceTest, RejectsNonPositiveScale) {
  RandomStream rng(2, "bad");
  EXPECT_EQ(LaplaceVector(0.0, 3, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(LaplaceVector(-1.0, 3, rng).ok());
}

TEST(PvecTest, ZeroAndScalarOperatorsAreUniform) {
  RandomStream rng(3, "uniform");
  for (double lambda : {0.0, 5.0}) {
    const Matrix a = lambda * Matrix::Identity(4, 4);
    const int trials = 40000;
    double sum_sq = 0.0;
    for (int i = 0; i < trials; ++i) {
      const Vector v = *Pvec(a, rng);
      ASSERT_NEAR(v.norm(), 1.0, 1e-12);
      sum_sq += v(0) * v(0);
    }
    // v(0)^2 ~ Beta(1/2, 3/2): mean 1/4, variance 3/80.
    EXPECT_NEAR(sum_sq / trials, 0.25,
                4 * std::sqrt(3.0 / 80.0 / trials));
  }
}

TEST(PvecTest, OneDimensionalIsRandomSign) {
  RandomStream rng(4, "sign");
  int plus = 0;
  for (int i = 0; i < 2000; ++i) {
    const Vector v = *Pvec(Matrix::Constant(1, 1, 3.0), rng);
    ASSERT_EQ(std::fabs(v(0)), 1.0);
    plus += v(0) > 0;
  }
  EXPECT_NEAR(plus, 1000, 4 * std::sqrt(500.0));
}

TEST(PvecTest, ConcentratesOnTopEigenvector) {
  RandomStream rng(5, "top");
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 100;
  const int trials = 20000;
  int close = 0;
  int closer = 0;
  for (int i = 0; i < trials; ++i) {
    const double c = std::fabs((*Pvec(a, rng))(0));
    close += c > 0.99;
    closer += c > 0.97;
  }
  // The cap |v_1| > 0.99 carries about 86% of the mass; 0.97 carries > 99%.
  for (auto [count, cut] : {std::pair{close, 0.99}, std::pair{closer, 0.97}}) {
    const double mass = TiltedCapMass(100, cut);
    EXPECT_NEAR(static_cast<double>(count) / trials, mass,
                4 * std::sqrt(mass * (1 - mass) / trials));
  }
  EXPECT_NEAR(TiltedCapMass(100, 0.99), 0.8619, 1e-4);
  EXPECT_GT(TiltedCapMass(100, 0.97), 0.99);
}

TEST(PvecTest, AccuracyInLargeEigenvalueRegime) {
  RandomStream rng(6, "acc");
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 60;
  a(1, 1) = 10;
  double sum = 0.0;
  const int trials = 5000;
  for (int i = 0; i < trials; ++i) {
    const Vector v = *Pvec(a, rng);
    sum += v.dot(a * v);
  }
  // gamma = 0.1: the mean quadratic form stays above 0.9 lambda_1.
  EXPECT_GE(sum / trials, 0.9 * 60);
}

TEST(PvecTest, RejectsInvalidOperators) {
  RandomStream rng(7, "invalid");
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.1;
  EXPECT_EQ(Pvec(neg, rng).status().code(), absl::StatusCode::kInvalidArgument);
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_FALSE(Pvec(asym, rng).ok());
  EXPECT_FALSE(Pvec(Matrix(0, 0), rng).ok());
  Matrix tiny = Matrix::Identity(2, 2);
  tiny(1, 1) = -1e-10;
  EXPECT_TRUE(Pvec(tiny, rng).ok());
}

TEST(HouseholderComplementTest, Orthonormal) {
  RandomStream rng(8, "hh");
  for (int q = 2; q <= 7; ++q) {
    Vector z(q);
    for (int i = 0; i < q; ++i) z(i) = rng.Normal();
    z.normalize();
    const Matrix c = HouseholderComplement(z);
    ASSERT_EQ(c.cols(), q - 1);
    EXPECT_LT((c.transpose() * c - Matrix::Identity(q - 1, q - 1)).norm(),
              1e-12);
    EXPECT_LT((c.transpose() * z).norm(), 1e-12);
  }
}

TEST(PrivateProjTest, OrthonormalAndFullRank) {
  RandomStream rng(9, "proj");
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 2 + trial % 5;
    Matrix g = Matrix::Random(p, p);
    const Matrix a = 10.0 * g * g.transpose();
    for (int t = 1; t <= p; ++t) {
      const PrivateProjection proj = *PrivateProj(a, t, rng);
      ASSERT_EQ(proj.rank(), t);
      EXPECT_LT((proj.basis.transpose() * proj.basis -
                 Matrix::Identity(t, t))
                    .cwiseAbs()
                    .maxCoeff(),
                1e-10);
      if (t == p) {
        const Matrix q = Matrix::Identity(p, p) - proj.Projector();
        EXPECT_LT((q * a * q).norm(), 1e-9 * a.norm());
      }
    }
  }
  EXPECT_FALSE(PrivateProj(Matrix::Identity(3, 3), 0, rng).ok());
  EXPECT_FALSE(PrivateProj(Matrix::Identity(3, 3), 4, rng).ok());
}

TEST(PrivateProjTest, ConcentratesOnDominantDirection) {
  RandomStream rng(10, "dominant");
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 100;
  const int trials = 5000;
  int close = 0;
  for (int i = 0; i < trials; ++i) {
    close += std::fabs((*PrivateProj(a, 1, rng)).basis(0, 0)) > 0.97;
  }
  const double mass = TiltedCapMass(100, 0.97);
  EXPECT_NEAR(static_cast<double>(close) / trials, mass,
              4 * std::sqrt(mass * (1 - mass) / trials));
  EXPECT_GE(close, 0.98 * trials);
}

TEST(PrivateProjTest, ZeroOperatorGivesUnitLine) {
  RandomStream rng(11, "zero");
  const PrivateProjection proj = *PrivateProj(Matrix::Zero(3, 3), 1, rng);
  EXPECT_NEAR(proj.basis.norm(), 1.0, 1e-12);
}

TEST(SimplexTest, Examples) {
  const Vector out = ProjectSimplexL1(Eigen::Vector3d(0.5, -0.2, 0.9));
  EXPECT_NEAR(out(0), 5.0 / 14.0, 1e-15);
  EXPECT_EQ(out(1), 0.0);
  EXPECT_NEAR(out(2), 9.0 / 14.0, 1e-15);
  const Eigen::Vector3d inside(0.2, 0.3, 0.5);
  EXPECT_TRUE(ProjectSimplexL1(inside).isApprox(inside, 1e-15));
  EXPECT_EQ(ProjectSimplexL1(Eigen::Vector2d(-1, -2)),
            Eigen::Vector2d(0.5, 0.5));
}

TEST(SimplexTest, FeasibleAndMinimalL1) {
  RandomStream rng(12, "simplex");
  for (int trial = 0; trial < 2000; ++trial) {
    const int s = 1 + trial % 6;
    Vector w(s);
    for (int i = 0; i < s; ++i) w(i) = 2 * rng.Uniform() - 0.6;
    const Vector out = ProjectSimplexL1(w);
    ASSERT_NEAR(out.sum(), 1.0, 1e-12);
    ASSERT_GE(out.minCoeff(), 0.0);
    // The l1 distance from w to the simplex is at least |1 - sum w+| plus the
    // negative mass; the rule attains it.
    const Vector pos = w.cwiseMax(0.0);
    const double lower =
        (w - pos).lpNorm<1>() + std::fabs(1.0 - pos.sum());
    if (pos.sum() > 0) EXPECT_NEAR((out - w).lpNorm<1>(), lower, 1e-12);
  }
}

TEST(BoxTest, Examples) {
  EXPECT_EQ(ProjectBoxL2(Eigen::Vector2d(1.3, -0.1), 1.0),
            Eigen::Vector2d(1.0, 0.0));
  const Eigen::Vector2d inner(0.3, 0.9);
  EXPECT_EQ(ProjectBoxL2(inner, 1.0), inner);
  const Vector corner = ProjectBoxL2(Eigen::Vector2d(2, 2), 1.0);
  EXPECT_EQ(corner, Eigen::Vector2d(1, 1));
  double best = 1e300;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 1000; ++j) {
      best = std::min(best, std::hypot(2 - i * 1e-3, 2 - j * 1e-3));
    }
  }
  EXPECT_NEAR((corner - Eigen::Vector2d(2, 2)).norm(), best, 1e-12);
  EXPECT_NEAR(best, std::sqrt(2.0), 1e-12);
}

TEST(BoxTest, IdempotentAndGridMinimal) {
  RandomStream rng(13, "box");
  const double side = 0.5;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2d y(3 * rng.Uniform() - 1, 3 * rng.Uniform() - 1);
    const Vector once = ProjectBoxL2(y, side);
    EXPECT_EQ(ProjectBoxL2(once, side), once);
    double best = 1e300;
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        best = std::min(best, std::hypot(y(0) - side * i / 100.0,
                                         y(1) - side * j / 100.0));
      }
    }
    EXPECT_LE((once - y).norm(), best + 1e-12);
  }
}

TEST(ConvexBodyTest, BoxAndBall) {
  const ConvexBody box = ConvexBody::Box(0.5);
  EXPECT_TRUE(box.contains(box.project(Eigen::Vector2d(3, -3)), 0.0));
  const ConvexBody ball = ConvexBody::UnitBall();
  const Vector onto = ball.project(Eigen::Vector2d(3, 4));
  EXPECT_NEAR(onto.norm(), 1.0, 1e-15);
  EXPECT_TRUE(onto.isApprox(Eigen::Vector2d(0.6, 0.8)));
  EXPECT_TRUE(ball.contains(Eigen::Vector2d(0.6, 0.0), 0.0));
  EXPECT_FALSE(ball.contains(Eigen::Vector2d(1.1, 0.0), 1e-12));
}

}  // namespace
}  // namespace microsynth
