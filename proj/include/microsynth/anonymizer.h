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

#ifndef MICROSYNTH_ANONYMIZER_H_
#define MICROSYNTH_ANONYMIZER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "microsynth/dataset.h"
#include "microsynth/partition.h"
#include "microsynth/rng.h"
#include "microsynth/tensor.h"

namespace microsynth {

struct MicroaggregateResult {
  Matrix centroids;    // k x p block means
  Partition block_map;  // equipartition into blocks of n/k
  int anonymity = 0;    // n / k

  // Intermediate stages, kept for audits.
  CoveringParams params;
  SpectralProjection projection;
  LatticeCovering covering;
  Partition nearest_point;
};

// Requires k | n and every row in the closed unit ball.
absl::StatusOr<MicroaggregateResult> Microaggregate(const Matrix& data, int k);

// Draws m rows i.i.d. from the atoms (rows of `atoms.points`) with
// probabilities `atoms.weights`.
absl::StatusOr<Matrix> Bootstrap(const WeightedAtoms& atoms, int m,
                                 RandomStream& rng);

// Uniform weights over the rows of `points`.
WeightedAtoms UniformAtoms(const Matrix& points);

// Replaces every entry x in [0,1] by an independent Bernoulli(x). Entries
// within 1e-12 of [0,1] are clamped first; others are rejected.
absl::StatusOr<Matrix> RandomizedRound(const Matrix& values, RandomStream& rng);

struct Algorithm1Run {
  SynthDataset synth;
  MicroaggregateResult aggregate;
  MarginalErrorReport report;
};

// Scale by 1/sqrt(p), microaggregate, bootstrap m rows, undo the scaling and
// round to the Boolean cube. Reports marginal errors for `degrees` that do
// not exceed p.
absl::StatusOr<Algorithm1Run> RunAlgorithm1(
    const Matrix& boolean_data, int k, int m, std::uint64_t seed,
    std::span<const int> degrees = kDefaultDegrees,
    std::uint64_t max_tuples = kAllTuples);

}  // namespace microsynth

#endif  // MICROSYNTH_ANONYMIZER_H_
