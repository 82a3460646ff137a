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

#ifndef MICROSYNTH_DATASET_H_
#define MICROSYNTH_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"

namespace microsynth {

// Records are rows: an n x p matrix holds n records with p features.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Domain {
  kBooleanCube,  // {0,1}^p
  kUnitCube,     // [0,1]^p
  kScaledCube,   // p^{-1/2} [0,1]^p, which lies in the unit ball
  kUnitBall,     // B_2^p
};

std::string_view DomainName(Domain domain);

// A dataset together with the column names read from its source file.
struct Dataset {
  Matrix rows;
  std::vector<std::string> column_names;

  Eigen::Index size() const { return rows.rows(); }
  Eigen::Index dimension() const { return rows.cols(); }
};

// Probability weights w_j on the unit simplex paired with representatives
// y_j (rows of `points`).
struct WeightedAtoms {
  Vector weights;
  Matrix points;
};

// Synthetic output plus the parameters that produced it.
struct SynthDataset {
  Matrix rows;
  Domain domain = Domain::kBooleanCube;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> provenance;
};

bool IsBoolean(const Matrix& data);
bool AllRowsInUnitBall(const Matrix& data, double tolerance = 1e-12);

// Column-major bit packing of a Boolean matrix: column j occupies
// words [j * words_per_column, (j + 1) * words_per_column). Padding bits in
// the last word are zero.
class BitColumns {
 public:
  static absl::StatusOr<BitColumns> FromMatrix(const Matrix& data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_column() const { return words_; }
  const std::uint64_t* column(std::size_t j) const {
    return bits_.data() + j * words_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// binom(p, d) as a double; exact while the value fits in 53 bits.
double Binomial(int p, int d);
double Factorial(int d);

}  // namespace microsynth

#endif  // MICROSYNTH_DATASET_H_
