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

#include "microsynth/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "microsynth/audit.h"
#include "microsynth/rng.h"
#include "support/fixtures.h"

namespace microsynth {
namespace {

TEST(SecondMomentTest, HandExamples) {
  Matrix e1 = Matrix::Zero(1, 3);
  e1(0, 0) = 1;
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1;
  EXPECT_EQ(SecondMoment(e1), expected);

  Matrix two = Matrix::Zero(2, 2);
  two(0, 0) = 1;
  two(1, 1) = 1;
  EXPECT_EQ(SecondMoment(two), Matrix(Vector::Constant(2, 0.5).asDiagonal()));

  Eigen::RowVector3d x(0.2, -0.4, 0.5);
  Matrix same(4, 3);
  for (int i = 0; i < 4; ++i) same.row(i) = x;
  EXPECT_TRUE(SecondMoment(same).isApprox(x.transpose() * x, 1e-15));
}

TEST(TopProjectionTest, DiagonalExample) {
  const Matrix s = Eigen::Vector3d(0.5, 0.3, 0.2).asDiagonal();
  const SpectralProjection proj = *TopProjection(s, 1);
  ASSERT_EQ(proj.rank(), 1);
  EXPECT_NEAR(std::fabs(proj.basis(0, 0)), 1.0, 1e-12);
  EXPECT_TRUE(proj.Validate().ok());
}

TEST(TopProjectionTest, FullAndZeroRank) {
  RandomStream rng(1, "top");
  const Matrix x = testing::RandomBallPoints(50, 4, rng);
  const Matrix s = SecondMoment(x);
  const SpectralProjection full = *TopProjection(s, 4);
  EXPECT_LT(ProjectedResidual(s, full).norm(), 1e-12);
  const SpectralProjection zero = *TopProjection(s, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  EXPECT_NEAR(ProjectedResidual(s, zero).operatorNorm(),
              solver.eigenvalues().maxCoeff(), 1e-12);
  EXPECT_FALSE(TopProjection(s, 5).ok());
}

TEST(TopProjectionTest, ResidualMatchesTailEigenvaluesAndBound) {
  RandomStream rng(2, "residual");
  for (int trial = 0; trial < 25; ++trial) {
    const int p = 3 + trial % 6;
    const Matrix x = testing::RandomBallPoints(40, p, rng);
    const Matrix s = SecondMoment(x);
    ASSERT_LE(s.trace(), 1.0 + 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    for (int t = 1; t <= p; ++t) {
      const SpectralProjection proj = *TopProjection(s, t);
      ASSERT_TRUE(proj.Validate().ok());
      const Matrix residual = ProjectedResidual(s, proj);
      double tail = 0.0;
      for (int i = 0; i < p - t; ++i) {
        tail += solver.eigenvalues()(i) * solver.eigenvalues()(i);
      }
      EXPECT_NEAR(residual.squaredNorm(), tail, 1e-8);
      Eigen::SelfAdjointEigenSolver<Matrix> rs(residual);
      EXPECT_LE(rs.eigenvalues().cwiseAbs().maxCoeff(),
                1.0 / std::sqrt(static_cast<double>(t)) + 1e-12);
    }
  }
}

TEST(LatticeCoveringTest, OneDimensionalExamples) {
  SpectralProjection line{Matrix::Identity(3, 1)};
  const LatticeCovering half = *BuildLatticeCovering(line, 0.5);
  ASSERT_EQ(half.size(), 5);
  for (int j = 0; j < 5; ++j) EXPECT_DOUBLE_EQ(half.coords(0, j), -1.0 + 0.5 * j);
  EXPECT_LE(half.size(), 14);
  const LatticeCovering coarse = *BuildLatticeCovering(line, 0.99);
  ASSERT_EQ(coarse.size(), 3);
  EXPECT_DOUBLE_EQ(coarse.coords(0, 0), -0.99);
  EXPECT_DOUBLE_EQ(coarse.coords(0, 2), 0.99);
}

TEST(LatticeCoveringTest, SizeBoundAndSoundness) {
  RandomStream rng(3, "cover");
  for (int t = 1; t <= 4; ++t) {
    for (double alpha : {0.4, 0.6, 0.8, 0.95}) {
      Matrix q = Matrix::Random(6, t);
      Eigen::HouseholderQR<Matrix> qr(q);
      SpectralProjection proj{qr.householderQ() * Matrix::Identity(6, t)};
      const LatticeCovering cover = *BuildLatticeCovering(proj, alpha);
      EXPECT_LE(cover.size(), std::pow(7.0 / alpha, t));
      // 10^4 random points of the unit ball of ran(P).
      const Matrix pts = testing::RandomBallPoints(10000, t, rng);
      for (int i = 0; i < pts.rows(); ++i) {
        const Vector image = proj.basis * pts.row(i).transpose();
        const double best =
            (cover.points.colwise() - image).colwise().norm().minCoeff();
        ASSERT_LT(best, alpha) << "t=" << t << " alpha=" << alpha;
      }
    }
  }
}

TEST(LatticeCoveringTest, CapIsEnforced) {
  SpectralProjection proj{Matrix::Identity(6, 6)};
  EXPECT_EQ(BuildLatticeCovering(proj, 0.3, 1000).status().code(),
            absl::StatusCode::kResourceExhausted);
  EXPECT_FALSE(BuildLatticeCovering(proj, 1.0).ok());
}

LatticeCovering LineCovering(std::vector<double> centers) {
  LatticeCovering c;
  c.alpha = 0.99;
  c.basis = Matrix::Identity(1, 1);
  c.coords = Eigen::Map<Eigen::RowVectorXd>(centers.data(), centers.size());
  c.points = c.coords;
  c.lattice = Eigen::MatrixXi::Zero(1, centers.size());
  return c;
}

TEST(NearestPointPartitionTest, HandExamples) {
  Matrix pts(2, 1);
  pts << -0.9, 0.8;
  const Partition p = *NearestPointPartition(pts, LineCovering({-1, 1}));
  EXPECT_EQ(p.blocks, (std::vector<std::vector<int>>{{0}, {1}}));

  const Partition single = *NearestPointPartition(pts, LineCovering({0.3}));
  EXPECT_EQ(single.blocks, (std::vector<std::vector<int>>{{0, 1}}));

  Matrix tie(1, 1);
  tie << 0.0;
  const Partition t = *NearestPointPartition(tie, LineCovering({-0.5, 0.5}));
  EXPECT_EQ(t.blocks, (std::vector<std::vector<int>>{{0}, {}}));
}

TEST(NearestPointPartitionTest, ProjectedGapWithinTwoAlpha) {
  RandomStream rng(4, "approx");
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 5;
    const int t = 1 + trial % 3;
    const double alpha = 0.5 + 0.02 * trial;
    const Matrix x = testing::RandomBallPoints(150, p, rng);
    const SpectralProjection proj = *TopProjection(SecondMoment(x), t);
    const LatticeCovering cover = *BuildLatticeCovering(proj, alpha);
    const Partition part = *NearestPointPartition(x, cover);
    ASSERT_TRUE(part.Validate(150).ok());
    const Matrix means = BlockMeans(x, part);
    const std::vector<int> block = part.BlockOf(150);
    const Matrix proj_x = x * proj.basis;
    const Matrix proj_y = means * proj.basis;
    for (int i = 0; i < 150; ++i) {
      EXPECT_LE((proj_x.row(i) - proj_y.row(block[i])).norm(), 2 * alpha);
    }
  }
}

TEST(NearestPointPartitionTest, RejectsPointsOutsideBall) {
  Matrix pts(1, 1);
  pts << 1.5;
  EXPECT_FALSE(NearestPointPartition(pts, LineCovering({-1, 1})).ok());
}

TEST(EquipartitionTest, HandExample) {
  Partition in;
  in.blocks = {{0, 1, 2, 3}, {4, 5}};
  const Partition out = *Equipartition(in, 6, 3);
  EXPECT_TRUE(out.equal_sized);
  EXPECT_EQ(out.blocks,
            (std::vector<std::vector<int>>{{0, 1}, {2, 3}, {4, 5}}));
}

TEST(EquipartitionTest, IdentityAndSingleBlock) {
  Partition in;
  in.blocks = {{0, 1}, {2, 3}, {4, 5}};
  EXPECT_EQ(Equipartition(in, 6, 3)->blocks, in.blocks);
  const Partition one = *Equipartition(in, 6, 1);
  ASSERT_EQ(one.num_blocks(), 1);
  std::vector<int> all = one.blocks[0];
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (std::vector<int>{0, 1, 2, 3, 4, 5}));
}

TEST(EquipartitionTest, RejectsNonDivisor) {
  Partition in;
  in.blocks = {{0, 1, 2, 3, 4, 5}};
  EXPECT_EQ(Equipartition(in, 6, 4).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(EquipartitionTest, ConservationAndStructure) {
  RandomStream rng(5, "equi");
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 12;
    const int n = k * (1 + trial % 7);
    const Partition in = testing::RandomPartition(n, 1 + trial % 9, rng);
    const Partition out = *Equipartition(in, n, k);
    ASSERT_EQ(out.num_blocks(), k);
    ASSERT_TRUE(out.Validate(n).ok());
    std::vector<int> all;
    for (const auto& b : out.blocks) {
      ASSERT_EQ(static_cast<int>(b.size()), n / k);
      all.insert(all.end(), b.begin(), b.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<int> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    ASSERT_EQ(all, expected);
  }
}

// Merging residuals of k' input blocks costs at most k' / k in covariance
// loss; checked by brute force on small instances.
TEST(EquipartitionTest, ResidualMergeLossBound) {
  RandomStream rng(6, "merge");
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 4 + trial % 6;
    const int n = k * (2 + trial % 4);
    const int k_prime = static_cast<int>(std::floor(std::sqrt(k)));
    const Matrix x = testing::RandomBallPoints(n, 3, rng);
    const Partition in = testing::RandomPartition(n, k_prime, rng);
    const Partition out = *Equipartition(in, n, k);
    const double before = BruteCovarianceLoss(x, in)->loss;
    const double after = BruteCovarianceLoss(x, out)->loss;
    EXPECT_LE(after - before,
              static_cast<double>(in.num_blocks()) / k + 1e-12);
    EXPECT_LE(static_cast<double>(k_prime) / k, 1.0 / std::sqrt(k) + 1e-12);
  }
}

TEST(CoveringParamsTest, AnonymityChoices) {
  EXPECT_EQ(AnonymityCoveringParams(9).t, 0);
  EXPECT_EQ(AnonymityCoveringParams(16).k_prime, 4);
  EXPECT_EQ(AnonymityCoveringParams(16).t, 0);
  EXPECT_DOUBLE_EQ(AnonymityCoveringParams(16).alpha, 0.99);
  const CoveringParams big = AnonymityCoveringParams(256);
  EXPECT_EQ(big.k_prime, 16);
  EXPECT_NEAR(big.alpha, 0.7788, 1e-4);
  EXPECT_EQ(big.t, 1);
  EXPECT_EQ(AnonymityCoveringParams(81).t, 1);
}

}  // namespace
}  // namespace microsynth
