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

#ifndef MICROSYNTH_SIMD_KERNELS_H_
#define MICROSYNTH_SIMD_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace microsynth::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// True when the kernels for `isa` were compiled in and the CPU supports them.
bool IsaAvailable(Isa isa);

// The instruction set used by the dispatching entry points below.
Isa ActiveIsa();

// Pins dispatch to `isa` (falls back to scalar when unavailable) and returns
// the previous choice. Intended for equivalence tests.
Isa ForceIsa(Isa isa);

// Number of bit positions set in every one of `columns[0..num_columns)`,
// each `words` 64-bit words long. Requires num_columns >= 1 and zero
// padding bits.
std::uint64_t AndPopcount(const std::uint64_t* const* columns,
                          std::size_t num_columns, std::size_t words);

// For each of the `n` points (row-major, `dim` coordinates each) writes the
// index of the nearest of `s` centers. Centers are laid out coordinate-major:
// centers[c * s + j] is coordinate c of center j. Squared distances are
// accumulated coordinate by coordinate; ties go to the lowest index. All
// variants produce bit-identical distances, so assignments always agree.
void NearestCenter(const double* points, std::size_t n, std::size_t dim,
                   const double* centers, std::size_t s, std::int32_t* out);

namespace scalar {
std::uint64_t AndPopcount(const std::uint64_t* const* columns,
                          std::size_t num_columns, std::size_t words);
void NearestCenter(const double* points, std::size_t n, std::size_t dim,
                   const double* centers, std::size_t s, std::int32_t* out);
}  // namespace scalar

#if defined(MICROSYNTH_BUILD_AVX2)
namespace avx2 {
std::uint64_t AndPopcount(const std::uint64_t* const* columns,
                          std::size_t num_columns, std::size_t words);
void NearestCenter(const double* points, std::size_t n, std::size_t dim,
                   const double* centers, std::size_t s, std::int32_t* out);
}  // namespace avx2
#endif

}  // namespace microsynth::simd

#endif  // MICROSYNTH_SIMD_KERNELS_H_
