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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "microsynth/simd/kernels.h"

namespace microsynth::simd::scalar {

std::uint64_t AndPopcount(const std::uint64_t* const* columns,
                          std::size_t num_columns, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t acc = ~std::uint64_t{0};
    for (std::size_t c = 0; c < num_columns; ++c) acc &= columns[c][w];
    total += static_cast<std::uint64_t>(std::popcount(acc));
  }
  return total;
}

void NearestCenter(const double* points, std::size_t n, std::size_t dim,
                   const double* centers, std::size_t s, std::int32_t* out) {
  std::vector<double> dist(s);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = points + i * dim;
    for (std::size_t j = 0; j < s; ++j) dist[j] = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double* row = centers + c * s;
      for (std::size_t j = 0; j < s; ++j) {
        const double diff = x[c] - row[j];
        const double sq = diff * diff;
        dist[j] = dist[j] + sq;
      }
    }
    std::int32_t best = 0;
    for (std::size_t j = 1; j < s; ++j) {
      if (dist[j] < dist[best]) best = static_cast<std::int32_t>(j);
    }
    out[i] = best;
  }
}

}  // namespace microsynth::simd::scalar
