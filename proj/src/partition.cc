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

#include <cmath>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "microsynth/simd/kernels.h"
#include "microsynth/summation.h"

namespace microsynth {

absl::Status SpectralProjection::Validate(double tolerance) const {
  const Matrix gram = basis.transpose() * basis;
  const Matrix id = Matrix::Identity(gram.rows(), gram.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > tolerance && gram.size() > 0) {
    return absl::InternalError("projection basis is not orthonormal");
  }
  if (rank() > dimension()) {
    return absl::InvalidArgumentError("rank exceeds dimension");
  }
  return absl::OkStatus();
}

LatticeCovering LatticeCovering::Trivial(int p, double alpha) {
  LatticeCovering c;
  c.alpha = alpha;
  c.step = 0.0;
  c.lattice = Eigen::MatrixXi::Zero(0, 1);
  c.coords = Matrix::Zero(0, 1);
  c.points = Matrix::Zero(p, 1);
  c.basis = Matrix::Zero(p, 0);
  return c;
}

absl::Status Partition::Validate(int n) const {
  std::vector<char> seen(n, 0);
  std::size_t first_size = blocks.empty() ? 0 : blocks.front().size();
  for (const auto& block : blocks) {
    if (equal_sized && block.size() != first_size) {
      return absl::InternalError("blocks are not equal-sized");
    }
    for (int i : block) {
      if (i < 0 || i >= n) {
        return absl::InvalidArgumentError(
            absl::StrCat("index ", i, " outside [0, ", n, ")"));
      }
      if (seen[i]) {
        return absl::InvalidArgumentError(
            absl::StrCat("index ", i, " appears twice"));
      }
      seen[i] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) {
      return absl::InvalidArgumentError(
          absl::StrCat("index ", i, " is not covered"));
    }
  }
  return absl::OkStatus();
}

std::vector<int> Partition::BlockOf(int n) const {
  std::vector<int> block_of(n, -1);
  for (int b = 0; b < num_blocks(); ++b) {
    for (int i : blocks[b]) block_of[i] = b;
  }
  return block_of;
}

Matrix SecondMoment(const Matrix& data) {
  Matrix s = data.transpose() * data;
  s /= static_cast<double>(data.rows());
  // Symmetrize explicitly so downstream solvers see an exactly symmetric S.
  return 0.5 * (s + s.transpose());
}

absl::StatusOr<SpectralProjection> TopProjection(const Matrix& s, int t) {
  const int p = static_cast<int>(s.rows());
  if (s.cols() != p) return absl::InvalidArgumentError("S must be square");
  if (t < 0 || t > p) {
    return absl::InvalidArgumentError(
        absl::StrCat("rank ", t, " outside [0, ", p, "]"));
  }
  if (t == 0) return SpectralProjection::Zero(p);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) {
    return absl::InternalError(absl::StrCat(
        "eigensolver failed on ", p, "x", p, " matrix, info=",
        static_cast<int>(solver.info())));
  }
  SpectralProjection proj;
  proj.basis.resize(p, t);
  for (int i = 0; i < t; ++i) {
    proj.basis.col(i) = solver.eigenvectors().col(p - 1 - i);
  }
  return proj;
}

Matrix ProjectedResidual(const Matrix& s, const SpectralProjection& proj) {
  const Matrix complement =
      Matrix::Identity(s.rows(), s.cols()) - proj.Projector();
  return complement * s * complement;
}

namespace {

struct LatticeEnumerator {
  int t;
  double radius_sq;  // t / alpha^2, the bound on sum z_i^2
  std::size_t cap;
  std::vector<int> current;
  std::vector<std::vector<int>> found;
  bool overflow = false;

  void Recurse(int depth, std::int64_t used) {
    if (overflow) return;
    if (depth == t) {
      if (found.size() >= cap) {
        overflow = true;
        return;
      }
      found.push_back(current);
      return;
    }
    const double remaining = radius_sq - static_cast<double>(used);
    const int bound = static_cast<int>(std::floor(std::sqrt(remaining) + 1e-9));
    for (int z = -bound; z <= bound; ++z) {
      const std::int64_t next = used + static_cast<std::int64_t>(z) * z;
      if (static_cast<double>(next) > radius_sq * (1.0 + 1e-12)) continue;
      current[depth] = z;
      Recurse(depth + 1, next);
    }
  }
};

}  // namespace

absl::StatusOr<LatticeCovering> BuildLatticeCovering(
    const SpectralProjection& proj, double alpha, std::size_t max_points) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("covering accuracy ", alpha, " outside (0, 1)"));
  }
  const int t = proj.rank();
  const int p = proj.dimension();
  if (t == 0) return LatticeCovering::Trivial(p, alpha);

  LatticeEnumerator e{t, t / (alpha * alpha), max_points,
                      std::vector<int>(t, 0), {}, false};
  e.Recurse(0, 0);
  if (e.overflow) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "lattice covering exceeds ", max_points, " points at t=", t,
        ", alpha=", alpha, "; raise alpha or lower t"));
  }
  LatticeCovering c;
  c.alpha = alpha;
  c.step = alpha / std::sqrt(static_cast<double>(t));
  const int s = static_cast<int>(e.found.size());
  c.lattice.resize(t, s);
  c.coords.resize(t, s);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < t; ++i) {
      c.lattice(i, j) = e.found[j][i];
      c.coords(i, j) = c.step * e.found[j][i];
    }
  }
  c.basis = proj.basis;
  c.points = proj.basis * c.coords;
  return c;
}

absl::StatusOr<Partition> NearestPointPartition(const Matrix& points,
                                                const LatticeCovering& cover) {
  const int n = static_cast<int>(points.rows());
  const int s = cover.size();
  if (s < 1) return absl::InvalidArgumentError("empty covering");
  Partition out;
  out.blocks.resize(s);
  const int t = cover.rank();
  if (t == 0) {
    // Every projected point is the origin, nearest to the lone center.
    for (int i = 0; i < n; ++i) out.blocks[0].push_back(i);
    return out;
  }
  if (cover.basis.rows() != points.cols()) {
    return absl::InvalidArgumentError("covering and data dimension differ");
  }
  // Coordinates of P x_i in the covering basis, row-major n x t.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      projected = points * cover.basis;
  for (int i = 0; i < n; ++i) {
    if (projected.row(i).norm() > 1.0 + 1e-9) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " projects outside the unit ball"));
    }
  }
  // Coordinate-major centers, as the kernel expects.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      centers = cover.coords;
  std::vector<std::int32_t> nearest(n);
  simd::NearestCenter(projected.data(), n, t, centers.data(), s,
                      nearest.data());
  for (int i = 0; i < n; ++i) out.blocks[nearest[i]].push_back(i);
  return out;
}

absl::StatusOr<Partition> Equipartition(const Partition& input, int n, int k) {
  if (k < 1) return absl::InvalidArgumentError("k must be positive");
  if (n % k != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("k=", k, " does not divide n=", n));
  }
  if (absl::Status s = input.Validate(n); !s.ok()) return s;
  const std::size_t r = static_cast<std::size_t>(n / k);
  Partition out;
  out.equal_sized = true;
  std::vector<int> residual;
  for (const auto& block : input.blocks) {
    const std::size_t full = block.size() / r;
    for (std::size_t c = 0; c < full; ++c) {
      out.blocks.emplace_back(block.begin() + c * r,
                              block.begin() + (c + 1) * r);
    }
    residual.insert(residual.end(), block.begin() + full * r, block.end());
  }
  for (std::size_t c = 0; c < residual.size() / r; ++c) {
    out.blocks.emplace_back(residual.begin() + c * r,
                            residual.begin() + (c + 1) * r);
  }
  if (out.num_blocks() != k) {
    return absl::InternalError("equipartition produced the wrong block count");
  }
  return out;
}

CoveringParams AnonymityCoveringParams(int k) {
  CoveringParams c;
  c.k_prime = static_cast<int>(std::floor(std::sqrt(static_cast<double>(k))));
  // Guard against rounding in sqrt for perfect squares.
  while (static_cast<long long>(c.k_prime + 1) * (c.k_prime + 1) <= k) {
    ++c.k_prime;
  }
  while (static_cast<long long>(c.k_prime) * c.k_prime > k) --c.k_prime;
  if (c.k_prime < 16) {
    c.alpha = 0.99;
  } else {
    const double lk = std::log(static_cast<double>(c.k_prime));
    c.alpha = std::pow(std::log(lk) / lk, 0.25);
  }
  if (c.k_prime <= 1) {
    c.t = 0;
  } else {
    c.t = static_cast<int>(std::floor(std::log(static_cast<double>(c.k_prime)) /
                                      std::log(7.0 / c.alpha)));
  }
  return c;
}

Matrix BlockMeans(const Matrix& data, const Partition& partition) {
  Matrix means = Matrix::Zero(partition.num_blocks(), data.cols());
  for (int b = 0; b < partition.num_blocks(); ++b) {
    const auto& block = partition.blocks[b];
    if (block.empty()) continue;
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      CompensatedSum sum;
      for (int i : block) sum.Add(data(i, j));
      means(b, j) = sum.Total() / static_cast<double>(block.size());
    }
  }
  return means;
}

}  // namespace microsynth
