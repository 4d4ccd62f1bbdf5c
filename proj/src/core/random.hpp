// Copyright 2026 The nmtnoise Authors
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

#pragma once

#include <cstdint>

namespace nmtnoise {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// A small counter-based stream. Every token of every corpus gets its own
// RandomSource derived from its coordinates, so the state is one word and
// construction is free.
//
// Derivation: child = mix64(state ^ mix64(label ^ kLabelKey)).
// Draws:      state += kGamma; out = mix64(state).
class RandomSource {
 public:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr uint64_t kLabelKey = 0xD1B54A32D192ED03ULL;

  constexpr explicit RandomSource(uint64_t seed) : state_(mix64(seed)) {}

  // Independent child stream identified by `label`. Order of derivation
  // matters: derive(a).derive(b) != derive(b).derive(a).
  [[nodiscard]] constexpr RandomSource derive(uint64_t label) const {
    RandomSource child(0);
    child.state_ = mix64(state_ ^ mix64(label ^ kLabelKey));
    return child;
  }

  constexpr uint64_t next() {
    state_ += kGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). bound must be > 0. Lemire's nearly-divisionless
  // rejection, so there is no modulo bias.
  uint64_t uniform_below(uint64_t bound);

  constexpr uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

// Domain labels keep synthetic and natural noising on disjoint streams even
// when users pass the same base seed to both.
inline constexpr uint64_t kSyntheticDomain = 0x53594E5448ULL;  // "SYNTH"
inline constexpr uint64_t kNaturalDomain = 0x4E41545552ULL;    // "NATUR"

// Stream for token `token_index` of line `line_index` in epoch `epoch`.
RandomSource derive_seed(uint64_t base_seed, uint64_t epoch,
                         uint64_t line_index, uint64_t token_index);

}  // namespace nmtnoise
