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

#include "microsynth/dataset.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace microsynth {

std::string_view DomainName(Domain domain) {
  switch (domain) {
    case Domain::kBooleanCube:
      return "boolean_cube";
    case Domain::kUnitCube:
      return "unit_cube";
    case Domain::kScaledCube:
      return "scaled_cube";
    case Domain::kUnitBall:
      return "unit_ball";
  }
  return "unknown";
}

bool IsBoolean(const Matrix& data) {
  return (data.array() == 0.0 || data.array() == 1.0).all();
}

bool AllRowsInUnitBall(const Matrix& data, double tolerance) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    if (data.row(i).squaredNorm() > 1.0 + tolerance) return false;
  }
  return true;
}

absl::StatusOr<BitColumns> BitColumns::FromMatrix(const Matrix& data) {
  BitColumns out;
  out.rows_ = static_cast<std::size_t>(data.rows());
  out.cols_ = static_cast<std::size_t>(data.cols());
  out.words_ = (out.rows_ + 63) / 64;
  out.bits_.assign(out.words_ * out.cols_, 0);
  for (std::size_t j = 0; j < out.cols_; ++j) {
    std::uint64_t* col = out.bits_.data() + j * out.words_;
    for (std::size_t i = 0; i < out.rows_; ++i) {
      const double v = data(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(j));
      if (v == 1.0) {
        col[i / 64] |= std::uint64_t{1} << (i % 64);
      } else if (v != 0.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-Boolean entry ", v, " at row ", i, ", column ",
                         j));
      }
    }
  }
  return out;
}

double Binomial(int p, int d) {
  if (d < 0 || d > p) return 0.0;
  d = std::min(d, p - d);
  double result = 1.0;
  for (int i = 1; i <= d; ++i) {
    result = result * (p - d + i) / i;
  }
  return std::round(result);
}

double Factorial(int d) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

}  // namespace microsynth
