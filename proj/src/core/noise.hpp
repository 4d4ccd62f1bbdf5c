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

// Synthetic character-level noise: the four edit operations and the
// per-token mixture sampler that chooses between them.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/random.hpp"

namespace nmtnoise {

class Alphabet;

// A whitespace-free, non-empty run of Unicode scalar values.
class Token {
 public:
  // Throws ContractViolation when `chars` is empty or contains whitespace.
  explicit Token(std::u32string chars);
  static Token from_utf8(std::string_view text);

  const std::u32string& chars() const { return chars_; }
  size_t size() const { return chars_.size(); }
  std::string to_utf8() const;

  friend bool operator==(const Token&, const Token&) = default;

 private:
  struct Trusted {};
  Token(Trusted, std::u32string chars) : chars_(std::move(chars)) {}

  friend Token delete_char(const Token&, size_t);
  friend Token insert_char(const Token&, size_t, char32_t, const Alphabet&);
  friend Token substitute_char(const Token&, size_t, char32_t);
  friend Token swap_chars(const Token&, size_t);

  std::u32string chars_;
};

enum class NoiseType : int {
  kClean = 0,
  kDeletion = 1,
  kInsertion = 2,
  kSubstitution = 3,
  kSwap = 4,
};

inline constexpr size_t kNumNoiseTypes = 5;
inline constexpr std::array<NoiseType, 4> kNoiseOps = {
    NoiseType::kDeletion, NoiseType::kInsertion, NoiseType::kSubstitution,
    NoiseType::kSwap};

// Mixture-string key ("clean", "del", "ins", "sub", "swap").
std::string_view noise_key(NoiseType type);
// Display name ("Clean", "Deletion", ...).
std::string_view noise_name(NoiseType type);

// Categorical distribution over the five NoiseType values.
class NoiseMixture {
 public:
  static constexpr double kSumTolerance = 1e-9;
  static constexpr double kParseTolerance = 1e-6;

  // {clean: 0.6, each noise type: 0.1}.
  NoiseMixture();

  // Weights indexed by NoiseType. Throws ContractViolation on negative or
  // non-finite entries, or when the sum is off by more than kSumTolerance.
  static NoiseMixture from_weights(const std::array<double, kNumNoiseTypes>& w);

  // Point mass on one type.
  static NoiseMixture only(NoiseType type);

  // Parses `clean=0.6,del=0.1,ins=0.1,sub=0.1,swap=0.1`. Keys may appear in
  // any order, at most once; omitted keys are 0. The sum must be within
  // kParseTolerance of 1 and is then renormalized exactly. Throws ParseError.
  static NoiseMixture parse(std::string_view spec);

  double weight(NoiseType type) const {
    return weights_[static_cast<size_t>(type)];
  }
  const std::array<double, kNumNoiseTypes>& weights() const { return weights_; }

  // Canonical mixture string with shortest round-trip decimals; all five
  // keys in fixed order. parse(to_string()) reproduces the weights.
  std::string to_string() const;

  friend bool operator==(const NoiseMixture&, const NoiseMixture&) = default;

 private:
  explicit NoiseMixture(const std::array<double, kNumNoiseTypes>& w)
      : weights_(w) {}
  std::array<double, kNumNoiseTypes> weights_;
};

// Ordered set of symbols that insertions and substitutions draw from.
class Alphabet {
 public:
  // Throws ContractViolation if `symbols` is empty, has duplicates, or
  // contains whitespace.
  explicit Alphabet(std::vector<char32_t> symbols);

  // Every distinct non-whitespace scalar in `text`. Throws ContractViolation
  // if there are none.
  static Alphabet from_text(std::u32string_view text);

  bool contains(char32_t c) const;
  size_t size() const { return symbols_.size(); }
  char32_t operator[](size_t i) const { return symbols_[i]; }
  std::span<const char32_t> symbols() const { return symbols_; }

 private:
  std::vector<char32_t> symbols_;  // sorted ascending
};

// Collects the distinct non-whitespace scalars of a corpus streamed through
// it line by line.
class AlphabetBuilder {
 public:
  void add(std::u32string_view text);
  bool empty() const;
  Alphabet build() const;

 private:
  std::vector<bool> bmp_ = std::vector<bool>(0x10000, false);
  std::vector<char32_t> astral_;
};

// The four edit operations. Each throws ContractViolation when its
// precondition fails.

// Removes the character at `index`. Requires size() >= 2.
Token delete_char(const Token& token, size_t index);
// Inserts `symbol` before position `gap` (gap == size() appends). `symbol`
// must be a member of `alphabet`.
Token insert_char(const Token& token, size_t gap, char32_t symbol,
                  const Alphabet& alphabet);
// Replaces the character at `index`; `symbol` must differ from it.
Token substitute_char(const Token& token, size_t index, char32_t symbol);
// Exchanges positions index and index+1. Requires size() >= 4 and
// 1 <= index <= size() - 3 so the first and last characters stay put.
Token swap_chars(const Token& token, size_t index);

// Two-stage draw: a Bernoulli for clean against noised, then, if noised, a
// categorical over the four noise types renormalized to the noised mass. The
// marginal is exactly the mixture. Staging couples mixtures that share a
// seed: every token noised under clean mass c is also noised under any
// smaller clean mass with the same noise split.
NoiseType sample_noise_type(const NoiseMixture& mixture, RandomSource& rng);

struct NoiseOutcome {
  Token token;
  NoiseType drawn;    // the sampler's choice
  NoiseType applied;  // kClean when the token was exempt or the draw fell back
};

// Noises one token. Single-character tokens are returned unchanged; so are
// tokens that draw Swap without an interior pair of distinct characters
// (always the case below length 4), and tokens that draw Substitution when
// the alphabet holds no symbol other than the one being replaced. A swap
// position is uniform over the interior pairs of distinct characters.
NoiseOutcome noise_token_detailed(const Token& token,
                                  const NoiseMixture& mixture,
                                  const Alphabet& alphabet, RandomSource& rng);

inline Token noise_token(const Token& token, const NoiseMixture& mixture,
                         const Alphabet& alphabet, RandomSource& rng) {
  return noise_token_detailed(token, mixture, alphabet, rng).token;
}

}  // namespace nmtnoise
