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

#ifndef MICROSYNTH_DPPIPELINE_H_
#define MICROSYNTH_DPPIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "microsynth/dataset.h"
#include "microsynth/dpmech.h"
#include "microsynth/partition.h"
#include "microsynth/rng.h"
#include "microsynth/tensor.h"

namespace microsynth {

struct DpParams {
  int n = 0;
  int p = 0;
  double epsilon = 0.0;
  double kappa = 1.0 / 3.0;
  int m = 0;
  std::uint64_t seed = 0;

  // Derived:
  //   alpha = (ln n)^{-1/4}
  //   t     = min(p, floor(kappa ln n / ln(7 / alpha)))
  //   b     = sqrt(p n^{1-kappa} / epsilon)
  //   weight noise scale 6 / (n epsilon), vector noise scale
  //   12 sqrt(p) / (b epsilon).
  double alpha = 0.0;
  int t_formula = 0;
  int t = 0;
  double b = 0.0;
  double weight_noise_scale = 0.0;
  double vector_noise_scale = 0.0;

  static absl::StatusOr<DpParams> Derive(int n, int p, double epsilon,
                                         double kappa, int m,
                                         std::uint64_t seed);
};

// w_j = |F_j| / n and y~_j = sum_{i in F_j} x_i / max(|F_j|, b). Empty blocks
// give weight 0 at the origin.
absl::StatusOr<WeightedAtoms> DampedMicroaggregate(const Matrix& data,
                                                   const Partition& partition,
                                                   double b);

struct NoisyAtoms {
  WeightedAtoms atoms;  // projected weights and vectors
  Vector rho;           // weight noise, length s
  Matrix r;             // vector noise, s x p
};

// w_bar = pi_simplex(w + rho), y_bar_j = pi_K(y~_j + r_j) with rho i.i.d.
// Laplace(weight_scale) and r_j i.i.d. Laplace(vector_scale). A scale of 0
// disables that noise source (test hook).
absl::StatusOr<NoisyAtoms> NoiseAndProject(const WeightedAtoms& damped,
                                           double weight_scale,
                                           double vector_scale,
                                           const ConvexBody& body,
                                           RandomStream& rng);

struct BudgetEntry {
  std::string stage;
  double epsilon = 0.0;
};

struct Algorithm2Run {
  DpParams params;
  Matrix scaled;  // input rows divided by sqrt(p)
  Matrix second_moment;
  SpectralProjection projection;
  LatticeCovering covering;
  Partition partition;
  WeightedAtoms damped;
  NoisyAtoms noisy;
  bool zero_projection_fallback = false;
  std::vector<BudgetEntry> ledger;
  SynthDataset synth;
  MarginalErrorReport report;
};

// The full private pipeline on Boolean rows. Rows are scaled into
// K = p^{-1/2} [0,1]^p, and the budget is split evenly between the
// projection, the weights and the vectors.
absl::StatusOr<Algorithm2Run> RunAlgorithm2(
    const Matrix& boolean_data, double epsilon, double kappa, int m,
    std::uint64_t seed, std::span<const int> degrees = kDefaultDegrees,
    std::uint64_t max_tuples = kAllTuples);

}  // namespace microsynth

#endif  // MICROSYNTH_DPPIPELINE_H_
