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

#include <atomic>
#include <cstddef>
#include <cstdint>

#include "microsynth/simd/kernels.h"

namespace microsynth::simd {
namespace {

Isa DetectIsa() {
#if defined(MICROSYNTH_BUILD_AVX2)
  if (__builtin_cpu_supports("avx2")) return Isa::kAvx2;
#endif
  return Isa::kScalar;
}

std::atomic<Isa>& Selected() {
  static std::atomic<Isa> selected{DetectIsa()};
  return selected;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  if (isa == Isa::kScalar) return true;
  return DetectIsa() == isa;
}

Isa ActiveIsa() { return Selected().load(std::memory_order_relaxed); }

Isa ForceIsa(Isa isa) {
  if (!IsaAvailable(isa)) isa = Isa::kScalar;
  return Selected().exchange(isa, std::memory_order_relaxed);
}

std::uint64_t AndPopcount(const std::uint64_t* const* columns,
                          std::size_t num_columns, std::size_t words) {
#if defined(MICROSYNTH_BUILD_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    return avx2::AndPopcount(columns, num_columns, words);
  }
#endif
  return scalar::AndPopcount(columns, num_columns, words);
}

void NearestCenter(const double* points, std::size_t n, std::size_t dim,
                   const double* centers, std::size_t s, std::int32_t* out) {
#if defined(MICROSYNTH_BUILD_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    avx2::NearestCenter(points, n, dim, centers, s, out);
    return;
  }
#endif
  scalar::NearestCenter(points, n, dim, centers, s, out);
}

}  // namespace microsynth::simd
