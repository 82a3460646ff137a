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

#ifndef MICROSYNTH_RNG_H_
#define MICROSYNTH_RNG_H_

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace microsynth {

// Counter-based generator: output i of a stream is a SplitMix64 finalizer
// applied to (key + i * golden_gamma). Streams are keyed by a run seed and a
// stage label, so every stochastic stage can be replayed in isolation.
// Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::string_view label);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on the open interval (0, 1).
  double UniformOpen();
  double Normal();

  // Independent child stream; does not advance this stream.
  RandomStream Derive(std::string_view label) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

std::uint64_t HashLabel(std::string_view label);

}  // namespace microsynth

#endif  // MICROSYNTH_RNG_H_
