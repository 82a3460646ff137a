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

#ifndef MICROSYNTH_TESTS_SUPPORT_FIXTURES_H_
#define MICROSYNTH_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "microsynth/dataset.h"
#include "microsynth/partition.h"
#include "microsynth/rng.h"
#include "microsynth/tensor.h"

namespace microsynth::testing {

// Independent Bernoulli(density) entries.
Matrix RandomBoolean(int n, int p, double density, RandomStream& rng);

// Rows drawn around a few prototypes with different densities, each bit
// flipped with probability `noise`. The clusters separate along the top
// eigenvector of the second moment.
Matrix MixtureBoolean(int n, int p, int clusters, double noise,
                      RandomStream& rng);

// Uniform points of the closed unit ball of R^p.
Matrix RandomBallPoints(int n, int p, RandomStream& rng);

// Dataset number `code` among all n x p Boolean matrices (bit i*p + j is
// entry (i, j)).
Matrix BooleanFromCode(std::uint64_t code, int n, int p);

// Marginal by plain nested loops.
double NaiveMarginal(const Matrix& data, std::span<const int> indices);

// Averaged and off-diagonal squared errors from dense moment tensors.
struct DenseErrors {
  double avg_sym_sq = 0.0;
  double off_sq = 0.0;
  double worst_entry = 0.0;
};
DenseErrors DenseOracleErrors(const Matrix& truth, const Matrix& synth, int d);
// Same, from precomputed moment tensors of equal order and dimension.
DenseErrors DenseErrorsFromMoments(const DenseTensor& truth,
                                   const DenseTensor& synth);

// A random partition of [0, n) into at most `max_blocks` nonempty blocks.
Partition RandomPartition(int n, int max_blocks, RandomStream& rng);

}  // namespace microsynth::testing

#endif  // MICROSYNTH_TESTS_SUPPORT_FIXTURES_H_
