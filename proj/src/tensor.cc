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

#include "microsynth/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <unordered_set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "microsynth/rng.h"
#include "microsynth/simd/kernels.h"
#include "microsynth/status_macros.h"
#include "microsynth/summation.h"

namespace microsynth {
namespace {

// Evaluates marginals of one dataset, via AND+popcount when it is Boolean
// and via a compensated sum of row products otherwise. Both routes return
// count / n for Boolean input, so they agree bit for bit.
class MarginalSource {
 public:
  explicit MarginalSource(const Matrix& data) : data_(data) {
    if (IsBoolean(data)) {
      auto bits = BitColumns::FromMatrix(data);
      if (bits.ok()) bits_ = *std::move(bits);
    }
  }

  double Evaluate(std::span<const int> indices) const {
    const double n = static_cast<double>(data_.rows());
    if (bits_.has_value()) {
      column_ptrs_.resize(indices.size());
      for (std::size_t c = 0; c < indices.size(); ++c) {
        column_ptrs_[c] = bits_->column(static_cast<std::size_t>(indices[c]));
      }
      const std::uint64_t count = simd::AndPopcount(
          column_ptrs_.data(), column_ptrs_.size(), bits_->words_per_column());
      return static_cast<double>(count) / n;
    }
    CompensatedSum sum;
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      double prod = 1.0;
      for (int j : indices) prod *= data_(i, j);
      sum.Add(prod);
    }
    return sum.Total() / n;
  }

 private:
  const Matrix& data_;
  std::optional<BitColumns> bits_;
  mutable std::vector<const std::uint64_t*> column_ptrs_;
};

absl::Status CheckPair(const Matrix& truth, const Matrix& synth, int d) {
  if (truth.cols() != synth.cols()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: ", truth.cols(), " vs ",
                     synth.cols()));
  }
  if (truth.rows() < 1 || synth.rows() < 1) {
    return absl::InvalidArgumentError("datasets must be non-empty");
  }
  return MarginalSpec{d, static_cast<int>(truth.cols())}.Validate();
}

bool NextTuple(std::vector<int>& tuple, int p) {
  const int d = static_cast<int>(tuple.size());
  int i = d - 1;
  while (i >= 0 && tuple[i] == p - d + i) --i;
  if (i < 0) return false;
  ++tuple[i];
  for (int j = i + 1; j < d; ++j) tuple[j] = tuple[j - 1] + 1;
  return true;
}

std::uint64_t Choose(int p, int d) {
  if (d < 0 || d > p) return 0;
  unsigned __int128 r = 1;
  for (int i = 1; i <= d; ++i) r = r * static_cast<unsigned>(p - d + i) / i;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

absl::Status MarginalSpec::Validate(bool require_half) const {
  if (degree < 1 || degree > dimension) {
    return absl::InvalidArgumentError(absl::StrCat(
        "degree ", degree, " outside [1, ", dimension, "]"));
  }
  if (require_half && dimension < 2 * degree) {
    return absl::InvalidArgumentError(
        absl::StrCat("need p >= 2d, got p=", dimension, " d=", degree));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> Marginal(const Matrix& data,
                                std::span<const int> indices) {
  if (data.rows() < 1) return absl::InvalidArgumentError("empty dataset");
  if (indices.empty()) return absl::InvalidArgumentError("empty index tuple");
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] < 0 || indices[c] >= data.cols()) {
      return absl::InvalidArgumentError(
          absl::StrCat("index ", indices[c], " out of range"));
    }
    if (c > 0 && indices[c] <= indices[c - 1]) {
      return absl::InvalidArgumentError(
          "indices must be strictly increasing and distinct");
    }
  }
  return MarginalSource(data).Evaluate(indices);
}

absl::StatusOr<std::uint64_t> TupleCount(int p, int d) {
  if (d < 0 || d > p) return 0;
  unsigned __int128 r = 1;
  for (int i = 1; i <= std::min(d, p - d); ++i) {
    r = r * static_cast<unsigned>(p - std::min(d, p - d) + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max() / 2) {
      return absl::ResourceExhaustedError(
          absl::StrCat("binom(", p, ",", d, ") overflows"));
    }
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<int> UnrankTuple(std::uint64_t rank, int p, int d) {
  std::vector<int> tuple(d);
  int v = 0;
  for (int i = 0; i < d; ++i) {
    while (true) {
      const std::uint64_t block = Choose(p - v - 1, d - i - 1);
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    tuple[i] = v++;
  }
  return tuple;
}

absl::StatusOr<DegreeError> DegreeErrorFor(const Matrix& truth,
                                           const Matrix& synth, int d,
                                           std::uint64_t max_tuples,
                                           std::uint64_t seed) {
  RETURN_IF_ERROR(CheckPair(truth, synth, d));
  const int p = static_cast<int>(truth.cols());
  ASSIGN_OR_RETURN(const std::uint64_t total, TupleCount(p, d));
  const MarginalSource x(truth);
  const MarginalSource y(synth);

  DegreeError out;
  out.degree = d;
  out.tuples_total = total;
  CompensatedSum sum;
  double worst = 0.0;

  if (max_tuples == 0) max_tuples = 1;
  if (total <= max_tuples) {
    std::vector<int> tuple(d);
    for (int i = 0; i < d; ++i) tuple[i] = i;
    do {
      const double e = x.Evaluate(tuple) - y.Evaluate(tuple);
      sum.Add(e * e);
      worst = std::max(worst, std::fabs(e));
    } while (NextTuple(tuple, p));
    out.tuples_evaluated = total;
    out.avg_sym_sq = sum.Total() / static_cast<double>(total);
    out.off_sq = Factorial(d) * sum.Total();
    out.worst_entry = worst;
    return out;
  }

  // Floyd's algorithm draws max_tuples distinct ranks uniformly.
  RandomStream rng(seed, "tuple_sample");
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(max_tuples * 2);
  for (std::uint64_t j = total - max_tuples; j < total; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t r = pick(rng);
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ranks(chosen.begin(), chosen.end());
  std::sort(ranks.begin(), ranks.end());
  std::vector<double> sq;
  sq.reserve(ranks.size());
  for (std::uint64_t r : ranks) {
    const std::vector<int> tuple = UnrankTuple(r, p, d);
    const double e = x.Evaluate(tuple) - y.Evaluate(tuple);
    sq.push_back(e * e);
    sum.Add(e * e);
    worst = std::max(worst, std::fabs(e));
  }
  const double count = static_cast<double>(sq.size());
  const double mean = sum.Total() / count;
  CompensatedSum dev;
  for (double v : sq) dev.Add((v - mean) * (v - mean));
  const double var = count > 1 ? dev.Total() / (count - 1) : 0.0;
  const double fpc = (static_cast<double>(total) - count) /
                     (static_cast<double>(total) - 1.0);
  out.sampled = true;
  out.tuples_evaluated = sq.size();
  out.avg_sym_sq = mean;
  out.off_sq = Factorial(d) * static_cast<double>(total) * mean;
  out.worst_entry = worst;
  out.std_error = std::sqrt(var / count * fpc);
  return out;
}

absl::StatusOr<double> AvgMarginalError(const Matrix& truth,
                                        const Matrix& synth, int d) {
  ASSIGN_OR_RETURN(const DegreeError e, DegreeErrorFor(truth, synth, d));
  return e.avg_sym_sq;
}

absl::StatusOr<double> OffDiagonalErrorSq(const Matrix& truth,
                                          const Matrix& synth, int d) {
  ASSIGN_OR_RETURN(const DegreeError e, DegreeErrorFor(truth, synth, d));
  return e.off_sq;
}

absl::StatusOr<MarginalErrorReport> ComputeReport(
    const Matrix& truth, const Matrix& synth, std::span<const int> degrees,
    std::uint64_t max_tuples, std::uint64_t seed) {
  MarginalErrorReport report;
  for (int d : degrees) {
    ASSIGN_OR_RETURN(DegreeError e,
                     DegreeErrorFor(truth, synth, d, max_tuples, seed));
    report.by_degree[d] = e;
  }
  return report;
}

DenseTensor::DenseTensor(int order, int dim) : order_(order), dim_(dim) {
  std::size_t size = 1;
  for (int i = 0; i < order; ++i) size *= static_cast<std::size_t>(dim);
  data_.assign(size, 0.0);
}

std::size_t DenseTensor::Offset(std::span<const int> index) const {
  std::size_t off = 0;
  for (int v : index) off = off * dim_ + static_cast<std::size_t>(v);
  return off;
}

std::vector<int> DenseTensor::Index(std::size_t offset) const {
  std::vector<int> index(order_);
  for (int i = order_ - 1; i >= 0; --i) {
    index[i] = static_cast<int>(offset % dim_);
    offset /= dim_;
  }
  return index;
}

double DenseTensor::FrobeniusNormSq() const {
  CompensatedSum sum;
  for (double v : data_) sum.Add(v * v);
  return sum.Total();
}

namespace {

absl::Status CheckBudget(int p, int d, std::size_t budget) {
  if (d < 1) return absl::InvalidArgumentError("tensor order must be >= 1");
  double entries = std::pow(static_cast<double>(p), d);
  if (entries > static_cast<double>(budget)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "dense tensor needs ", entries, " entries, budget is ", budget));
  }
  return absl::OkStatus();
}

// Moments are accumulated once per multiset of indices, multiplying
// coordinates in sorted index order, and then copied to every permutation.
// This makes the tensor exactly symmetric in floating point.
class SymmetricAccumulator {
 public:
  SymmetricAccumulator(int d, int p) : out_(d, p), canon_(out_.size()) {
    std::map<std::vector<int>, std::size_t> ids;
    for (std::size_t off = 0; off < out_.size(); ++off) {
      std::vector<int> idx = out_.Index(off);
      std::sort(idx.begin(), idx.end());
      auto [it, inserted] = ids.emplace(idx, tuples_.size());
      if (inserted) tuples_.push_back(idx);
      canon_[off] = it->second;
    }
    sums_.assign(tuples_.size(), CompensatedSum());
  }

  void Add(const Eigen::Ref<const Eigen::RowVectorXd>& x, double weight) {
    for (std::size_t c = 0; c < tuples_.size(); ++c) {
      double prod = 1.0;
      for (int j : tuples_[c]) prod *= x(j);
      sums_[c].Add(weight * prod);
    }
  }

  DenseTensor Finish(double divisor) {
    for (std::size_t off = 0; off < out_.size(); ++off) {
      out_.data()[off] = sums_[canon_[off]].Total() / divisor;
    }
    return std::move(out_);
  }

 private:
  DenseTensor out_;
  std::vector<std::size_t> canon_;
  std::vector<std::vector<int>> tuples_;
  std::vector<CompensatedSum> sums_;
};

}  // namespace

absl::StatusOr<DenseTensor> TensorMoment(const Matrix& data, int d,
                                         std::size_t budget) {
  if (data.rows() < 1) return absl::InvalidArgumentError("empty dataset");
  RETURN_IF_ERROR(CheckBudget(static_cast<int>(data.cols()), d, budget));
  SymmetricAccumulator acc(d, static_cast<int>(data.cols()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) acc.Add(data.row(i), 1.0);
  return acc.Finish(static_cast<double>(data.rows()));
}

absl::StatusOr<DenseTensor> WeightedTensorMoment(const Vector& weights,
                                                 const Matrix& points, int d,
                                                 std::size_t budget) {
  if (weights.size() != points.rows()) {
    return absl::InvalidArgumentError("weights and points disagree in count");
  }
  RETURN_IF_ERROR(CheckBudget(static_cast<int>(points.cols()), d, budget));
  SymmetricAccumulator acc(d, static_cast<int>(points.cols()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (weights(i) != 0.0) acc.Add(points.row(i), weights(i));
  }
  return acc.Finish(1.0);
}

absl::StatusOr<DenseTensor> Subtract(const DenseTensor& a,
                                     const DenseTensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim()) {
    return absl::InvalidArgumentError("tensor shapes differ");
  }
  DenseTensor out(a.order(), a.dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.data()[i] = a.data()[i] - b.data()[i];
  }
  return out;
}

double SymRestrictedNormSq(const DenseTensor& t) {
  CompensatedSum sum;
  for (std::size_t off = 0; off < t.size(); ++off) {
    const std::vector<int> idx = t.Index(off);
    if (std::adjacent_find(idx.begin(), idx.end(), std::greater_equal<int>()) ==
        idx.end()) {
      sum.Add(t.data()[off] * t.data()[off]);
    }
  }
  return sum.Total();
}

double OffRestrictedNormSq(const DenseTensor& t) {
  CompensatedSum sum;
  for (std::size_t off = 0; off < t.size(); ++off) {
    std::vector<int> idx = t.Index(off);
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) == idx.end()) {
      sum.Add(t.data()[off] * t.data()[off]);
    }
  }
  return sum.Total();
}

}  // namespace microsynth
