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

#include "support/fixtures.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "microsynth/tensor.h"

namespace microsynth::testing {

Matrix RandomBoolean(int n, int p, double density, RandomStream& rng) {
  Matrix out(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) out(i, j) = rng.Uniform() < density ? 1 : 0;
  }
  return out;
}

Matrix MixtureBoolean(int n, int p, int clusters, double noise,
                      RandomStream& rng) {
  Matrix prototypes(clusters, p);
  for (int c = 0; c < clusters; ++c) {
    const double density = (c + 0.5) / clusters;
    for (int j = 0; j < p; ++j) {
      prototypes(c, j) = rng.Uniform() < density ? 1 : 0;
    }
  }
  Matrix out(n, p);
  for (int i = 0; i < n; ++i) {
    const int c = i % clusters;
    for (int j = 0; j < p; ++j) {
      const bool flip = rng.Uniform() < noise;
      out(i, j) = flip ? 1.0 - prototypes(c, j) : prototypes(c, j);
    }
  }
  return out;
}

Matrix RandomBallPoints(int n, int p, RandomStream& rng) {
  Matrix out(n, p);
  for (int i = 0; i < n; ++i) {
    Vector g(p);
    for (int j = 0; j < p; ++j) g(j) = rng.Normal();
    const double radius = std::pow(rng.Uniform(), 1.0 / p);
    out.row(i) = (radius / g.norm()) * g.transpose();
  }
  return out;
}

Matrix BooleanFromCode(std::uint64_t code, int n, int p) {
  Matrix out(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) out(i, j) = (code >> (i * p + j)) & 1;
  }
  return out;
}

double NaiveMarginal(const Matrix& data, std::span<const int> indices) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    double prod = 1.0;
    for (int j : indices) prod *= data(i, j);
    sum += prod;
  }
  return sum / static_cast<double>(data.rows());
}

DenseErrors DenseOracleErrors(const Matrix& truth, const Matrix& synth,
                              int d) {
  return DenseErrorsFromMoments(*TensorMoment(truth, d),
                                *TensorMoment(synth, d));
}

DenseErrors DenseErrorsFromMoments(const DenseTensor& truth,
                                   const DenseTensor& synth) {
  const DenseTensor diff = *Subtract(truth, synth);
  DenseErrors out;
  out.avg_sym_sq =
      SymRestrictedNormSq(diff) / Binomial(diff.dim(), diff.order());
  out.off_sq = OffRestrictedNormSq(diff);
  for (std::size_t off = 0; off < diff.size(); ++off) {
    std::vector<int> idx = diff.Index(off);
    if (std::adjacent_find(idx.begin(), idx.end(),
                           std::greater_equal<int>()) == idx.end()) {
      out.worst_entry = std::max(out.worst_entry, std::fabs(diff.data()[off]));
    }
  }
  return out;
}

Partition RandomPartition(int n, int max_blocks, RandomStream& rng) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(rng.Uniform() * max_blocks);
  }
  Partition out;
  out.blocks.resize(max_blocks);
  for (int i = 0; i < n; ++i) out.blocks[labels[i]].push_back(i);
  out.blocks.erase(std::remove_if(out.blocks.begin(), out.blocks.end(),
                                  [](const auto& b) { return b.empty(); }),
                   out.blocks.end());
  return out;
}

}  // namespace microsynth::testing
