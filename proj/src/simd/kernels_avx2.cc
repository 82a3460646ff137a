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

#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "microsynth/simd/kernels.h"

namespace microsynth::simd::avx2 {
namespace {

// Per-byte popcount through a nibble lookup, summed into four 64-bit lanes.
inline __m256i PopcountLanes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2,
                                       3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2,
                                       2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                                        _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

}  // namespace

std::uint64_t AndPopcount(const std::uint64_t* const* columns,
                          std::size_t num_columns, std::size_t words) {
  __m256i sums = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= words; w += 4) {
    __m256i acc = _mm256_set1_epi64x(-1);
    for (std::size_t c = 0; c < num_columns; ++c) {
      acc = _mm256_and_si256(
          acc, _mm256_loadu_si256(
                   reinterpret_cast<const __m256i*>(columns[c] + w)));
    }
    sums = _mm256_add_epi64(sums, PopcountLanes(acc));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), sums);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; w < words; ++w) {
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
    std::size_t j = 0;
    // Lanes run over centers, so each lane performs exactly the scalar
    // sequence of sub, mul, add for its center.
    for (; j + 4 <= s; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t c = 0; c < dim; ++c) {
        const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(x[c]),
                                           _mm256_loadu_pd(centers + c * s + j));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
      }
      _mm256_storeu_pd(dist.data() + j, acc);
    }
    for (; j < s; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = x[c] - centers[c * s + j];
        const double sq = diff * diff;
        acc = acc + sq;
      }
      dist[j] = acc;
    }
    std::int32_t best = 0;
    for (std::size_t k = 1; k < s; ++k) {
      if (dist[k] < dist[best]) best = static_cast<std::int32_t>(k);
    }
    out[i] = best;
  }
}

}  // namespace microsynth::simd::avx2
