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

#ifndef MICROSYNTH_TENSOR_H_
#define MICROSYNTH_TENSOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "microsynth/dataset.h"

namespace microsynth {

inline constexpr std::uint64_t kAllTuples =
    std::numeric_limits<std::uint64_t>::max();
inline constexpr std::size_t kDefaultTensorBudget = 10'000'000;
inline constexpr std::array<int, 3> kDefaultDegrees = {1, 2, 3};

struct MarginalSpec {
  int degree = 1;
  int dimension = 1;

  // Checks 1 <= d <= p, and additionally p >= 2d when `require_half` is set
  // (needed for the off-vs-sym comparison inequality).
  absl::Status Validate(bool require_half = false) const;
};

// Error metrics for one degree d. With E the difference of the two d-th
// moment tensors:
//   avg_sym_sq  = binom(p,d)^{-1} * sum over i1<...<id of E(i)^2
//   off_sq      = sum over tuples of d distinct indices (all orders) of E^2
//   worst_entry = max |E(i)| over the examined tuples
// When binom(p,d) exceeds the tuple cap, tuples are sampled uniformly
// without replacement and avg_sym_sq, off_sq are Monte-Carlo estimates.
struct DegreeError {
  int degree = 0;
  double avg_sym_sq = 0.0;
  double off_sq = 0.0;
  double worst_entry = 0.0;
  bool sampled = false;
  std::uint64_t tuples_total = 0;
  std::uint64_t tuples_evaluated = 0;
  double std_error = 0.0;  // standard error of avg_sym_sq when sampled
};

struct MarginalErrorReport {
  std::map<int, DegreeError> by_degree;
};

// (1/n) * sum_i x_i(j_1) ... x_i(j_d) for 0-based strictly increasing
// indices.
absl::StatusOr<double> Marginal(const Matrix& data,
                                std::span<const int> indices);

absl::StatusOr<double> AvgMarginalError(const Matrix& truth,
                                        const Matrix& synth, int d);
absl::StatusOr<double> OffDiagonalErrorSq(const Matrix& truth,
                                          const Matrix& synth, int d);

absl::StatusOr<DegreeError> DegreeErrorFor(const Matrix& truth,
                                           const Matrix& synth, int d,
                                           std::uint64_t max_tuples = kAllTuples,
                                           std::uint64_t seed = 0);

absl::StatusOr<MarginalErrorReport> ComputeReport(
    const Matrix& truth, const Matrix& synth, std::span<const int> degrees,
    std::uint64_t max_tuples = kAllTuples, std::uint64_t seed = 0);

// binom(p, d) as an exact integer; errors on overflow.
absl::StatusOr<std::uint64_t> TupleCount(int p, int d);

// Lexicographic rank of a strictly increasing tuple and its inverse.
std::vector<int> UnrankTuple(std::uint64_t rank, int p, int d);

// Dense order-d tensor over R^p stored row-major (last index fastest).
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::span<const int> index) { return data_[Offset(index)]; }
  double at(std::span<const int> index) const { return data_[Offset(index)]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  std::size_t Offset(std::span<const int> index) const;
  // Inverse of Offset.
  std::vector<int> Index(std::size_t offset) const;

  double FrobeniusNormSq() const;

 private:
  int order_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
};

// (1/n) sum_i x_i^{(x)d}. Refuses tensors with more than `budget` entries.
absl::StatusOr<DenseTensor> TensorMoment(
    const Matrix& data, int d, std::size_t budget = kDefaultTensorBudget);

// sum_j w_j y_j^{(x)d} for the rows y_j of `points`.
absl::StatusOr<DenseTensor> WeightedTensorMoment(
    const Vector& weights, const Matrix& points, int d,
    std::size_t budget = kDefaultTensorBudget);

absl::StatusOr<DenseTensor> Subtract(const DenseTensor& a,
                                     const DenseTensor& b);

// Squared norm restricted to strictly increasing / pairwise distinct index
// tuples.
double SymRestrictedNormSq(const DenseTensor& t);
double OffRestrictedNormSq(const DenseTensor& t);

}  // namespace microsynth

#endif  // MICROSYNTH_TENSOR_H_
