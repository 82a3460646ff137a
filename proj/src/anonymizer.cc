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

#include "microsynth/anonymizer.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "microsynth/status_macros.h"
#include "microsynth/summation.h"

namespace microsynth {

absl::StatusOr<MicroaggregateResult> Microaggregate(const Matrix& data,
                                                    int k) {
  const int n = static_cast<int>(data.rows());
  const int p = static_cast<int>(data.cols());
  if (n < 1) return absl::InvalidArgumentError("empty dataset");
  if (k < 1 || n % k != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("k=", k, " must be positive and divide n=", n));
  }
  if (!AllRowsInUnitBall(data)) {
    return absl::InvalidArgumentError(
        "rows must lie in the unit ball; scale Boolean rows by 1/sqrt(p)");
  }
  MicroaggregateResult out;
  out.params = AnonymityCoveringParams(k);
  const int t = std::min(out.params.t, p);
  if (t == 0) {
    out.projection = SpectralProjection::Zero(p);
    out.covering = LatticeCovering::Trivial(p, out.params.alpha);
  } else {
    ASSIGN_OR_RETURN(out.projection, TopProjection(SecondMoment(data), t));
    ASSIGN_OR_RETURN(out.covering,
                     BuildLatticeCovering(out.projection, out.params.alpha));
  }
  ASSIGN_OR_RETURN(out.nearest_point,
                   NearestPointPartition(data, out.covering));
  ASSIGN_OR_RETURN(out.block_map, Equipartition(out.nearest_point, n, k));
  out.centroids = BlockMeans(data, out.block_map);
  out.anonymity = n / k;
  return out;
}

WeightedAtoms UniformAtoms(const Matrix& points) {
  WeightedAtoms atoms;
  atoms.points = points;
  atoms.weights =
      Vector::Constant(points.rows(), 1.0 / static_cast<double>(points.rows()));
  return atoms;
}

absl::StatusOr<Matrix> Bootstrap(const WeightedAtoms& atoms, int m,
                                 RandomStream& rng) {
  const Eigen::Index s = atoms.points.rows();
  if (s == 0) return absl::InvalidArgumentError("no atoms to sample from");
  if (atoms.weights.size() != s) {
    return absl::InvalidArgumentError("weights and atoms disagree in count");
  }
  if (m < 1) return absl::InvalidArgumentError("m must be positive");
  if ((atoms.weights.array() < 0.0).any()) {
    return absl::InvalidArgumentError("negative weight");
  }
  std::vector<double> cumulative(s);
  CompensatedSum sum;
  for (Eigen::Index j = 0; j < s; ++j) {
    sum.Add(atoms.weights(j));
    cumulative[j] = sum.Total();
  }
  const double total = cumulative.back();
  if (std::fabs(total - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("weights sum to ", total, ", not 1"));
  }
  Matrix out(m, atoms.points.cols());
  for (int i = 0; i < m; ++i) {
    const double u = rng.Uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // A zero-weight atom shares its cumulative value with its predecessor,
    // so upper_bound never selects it.
    const Eigen::Index j = std::min<Eigen::Index>(it - cumulative.begin(), s - 1);
    out.row(i) = atoms.points.row(j);
  }
  return out;
}

absl::StatusOr<Matrix> RandomizedRound(const Matrix& values,
                                       RandomStream& rng) {
  constexpr double kTolerance = 1e-12;
  Matrix out(values.rows(), values.cols());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      double x = values(i, j);
      if (!(x >= -kTolerance && x <= 1.0 + kTolerance)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "entry ", x, " at (", i, ", ", j, ") outside [0, 1]"));
      }
      x = std::clamp(x, 0.0, 1.0);
      out(i, j) = rng.Uniform() < x ? 1.0 : 0.0;
    }
  }
  return out;
}

absl::StatusOr<Algorithm1Run> RunAlgorithm1(const Matrix& boolean_data, int k,
                                            int m, std::uint64_t seed,
                                            std::span<const int> degrees,
                                            std::uint64_t max_tuples) {
  if (!IsBoolean(boolean_data)) {
    return absl::InvalidArgumentError("input must be Boolean");
  }
  if (k < 9) {
    return absl::InvalidArgumentError(
        absl::StrCat("k=", k, " below the minimum of 9"));
  }
  const int p = static_cast<int>(boolean_data.cols());
  if (p < 1) return absl::InvalidArgumentError("dataset has no columns");
  const double root_p = std::sqrt(static_cast<double>(p));
  const Matrix scaled = boolean_data / root_p;

  Algorithm1Run run;
  ASSIGN_OR_RETURN(run.aggregate, Microaggregate(scaled, k));

  RandomStream bootstrap_rng(seed, "bootstrap");
  ASSIGN_OR_RETURN(
      Matrix sampled,
      Bootstrap(UniformAtoms(run.aggregate.centroids), m, bootstrap_rng));
  // Undo the scaling; block means of scaled Boolean rows land in [0,1]
  // up to rounding, which RandomizedRound clamps.
  sampled *= root_p;
  RandomStream rounding_rng(seed, "rounding");
  ASSIGN_OR_RETURN(run.synth.rows, RandomizedRound(sampled, rounding_rng));
  run.synth.domain = Domain::kBooleanCube;
  run.synth.seed = seed;
  run.synth.provenance = {{"k", k},
                          {"m", m},
                          {"anonymity", run.aggregate.anonymity},
                          {"alpha", run.aggregate.params.alpha},
                          {"t", run.aggregate.projection.rank()},
                          {"s", run.aggregate.covering.size()}};

  std::vector<int> usable;
  for (int d : degrees) {
    if (d >= 1 && d <= p) usable.push_back(d);
  }
  ASSIGN_OR_RETURN(run.report, ComputeReport(boolean_data, run.synth.rows,
                                             usable, max_tuples, seed));
  return run;
}

}  // namespace microsynth
