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

#ifndef MICROSYNTH_PARTITION_H_
#define MICROSYNTH_PARTITION_H_

#include <cstddef>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "microsynth/dataset.h"

namespace microsynth {

// Orthogonal projection onto span of the columns of `basis` (p x t).
struct SpectralProjection {
  Matrix basis;

  int rank() const { return static_cast<int>(basis.cols()); }
  int dimension() const { return static_cast<int>(basis.rows()); }
  Matrix Projector() const { return basis * basis.transpose(); }
  absl::Status Validate(double tolerance = 1e-10) const;

  static SpectralProjection Zero(int p) { return {Matrix::Zero(p, 0)}; }
};

// The points of (alpha / sqrt(t)) Z^t inside the closed unit ball of R^t,
// mapped into R^p by the projection basis. Column j of `coords` is the
// t-dimensional lattice point and column j of `points` its image.
struct LatticeCovering {
  double alpha = 0.99;
  double step = 0.0;
  Eigen::MatrixXi lattice;  // t x s integer coordinates
  Matrix coords;            // t x s, equals step * lattice
  Matrix points;            // p x s
  Matrix basis;             // p x t

  int rank() const { return static_cast<int>(coords.rows()); }
  int size() const { return static_cast<int>(coords.cols()); }

  // A single covering point at the origin; used when t = 0.
  static LatticeCovering Trivial(int p, double alpha = 0.99);
};

struct Partition {
  std::vector<std::vector<int>> blocks;
  bool equal_sized = false;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  // Checks that the blocks are disjoint and cover [0, n), and that all
  // blocks have the same size when equal_sized is set.
  absl::Status Validate(int n) const;
  // block_of[i] is the block containing index i.
  std::vector<int> BlockOf(int n) const;
};

struct CoveringParams {
  int k_prime = 1;
  double alpha = 0.99;
  int t = 0;
};

inline constexpr std::size_t kDefaultCoveringCap = 5'000'000;

// S = (1/n) sum_i x_i x_i^T.
Matrix SecondMoment(const Matrix& data);

// Projection onto the eigenvectors of the t largest eigenvalues of S,
// ordered by decreasing eigenvalue.
absl::StatusOr<SpectralProjection> TopProjection(const Matrix& s, int t);

// (I - P) S (I - P).
Matrix ProjectedResidual(const Matrix& s, const SpectralProjection& proj);

absl::StatusOr<LatticeCovering> BuildLatticeCovering(
    const SpectralProjection& proj, double alpha,
    std::size_t max_points = kDefaultCoveringCap);

// Assigns each row x_i to the covering point nearest to P x_i, lowest index
// on ties. Returns one block per covering point; blocks may be empty.
absl::StatusOr<Partition> NearestPointPartition(const Matrix& points,
                                                const LatticeCovering& cover);

// Divide each block into chunks of n/k with a residual, merge the residuals
// in block order, and chunk them again. Output has exactly k blocks.
absl::StatusOr<Partition> Equipartition(const Partition& input, int n, int k);

// k' = floor(sqrt(k)), alpha = (ln ln k' / ln k')^{1/4} (0.99 when k' < 16),
// t = floor(ln k' / ln(7 / alpha)).
CoveringParams AnonymityCoveringParams(int k);

// Row i of the result is the mean of the rows of `data` in block i; empty
// blocks give the zero vector.
Matrix BlockMeans(const Matrix& data, const Partition& partition);

}  // namespace microsynth

#endif  // MICROSYNTH_PARTITION_H_
