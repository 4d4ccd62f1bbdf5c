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

#include "core/noise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"
#include "core/utf8.hpp"

namespace nmtnoise {

Token::Token(std::u32string chars) : chars_(std::move(chars)) {
  if (chars_.empty()) throw ContractViolation("token must not be empty");
  for (char32_t c : chars_) {
    if (utf8::is_whitespace(c)) {
      throw ContractViolation("token must not contain whitespace");
    }
  }
}

Token Token::from_utf8(std::string_view text) {
  return Token(utf8::decode(text));
}

std::string Token::to_utf8() const { return utf8::encode(chars_); }

std::string_view noise_key(NoiseType type) {
  switch (type) {
    case NoiseType::kClean: return "clean";
    case NoiseType::kDeletion: return "del";
    case NoiseType::kInsertion: return "ins";
    case NoiseType::kSubstitution: return "sub";
    case NoiseType::kSwap: return "swap";
  }
  return "?";
}

std::string_view noise_name(NoiseType type) {
  switch (type) {
    case NoiseType::kClean: return "Clean";
    case NoiseType::kDeletion: return "Deletion";
    case NoiseType::kInsertion: return "Insertion";
    case NoiseType::kSubstitution: return "Substitution";
    case NoiseType::kSwap: return "Swap";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// NoiseMixture

NoiseMixture::NoiseMixture() : weights_{0.6, 0.1, 0.1, 0.1, 0.1} {}

NoiseMixture NoiseMixture::from_weights(
    const std::array<double, kNumNoiseTypes>& w) {
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ContractViolation("mixture weights must be finite and >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ContractViolation("mixture weights sum to " + std::to_string(sum) +
                            ", expected 1");
  }
  return NoiseMixture(w);
}

NoiseMixture NoiseMixture::only(NoiseType type) {
  std::array<double, kNumNoiseTypes> w{};
  w[static_cast<size_t>(type)] = 1.0;
  return NoiseMixture(w);
}

NoiseMixture NoiseMixture::parse(std::string_view spec) {
  std::array<double, kNumNoiseTypes> w{};
  std::array<bool, kNumNoiseTypes> seen{};
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = spec.substr(pos, end - pos);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("mixture item '" + std::string(item) +
                       "' is not key=value");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    size_t slot = kNumNoiseTypes;
    for (size_t i = 0; i < kNumNoiseTypes; ++i) {
      if (key == noise_key(static_cast<NoiseType>(i))) slot = i;
    }
    if (slot == kNumNoiseTypes) {
      throw ParseError("unknown mixture key '" + std::string(key) +
                       "' (expected clean, del, ins, sub, swap)");
    }
    if (seen[slot]) {
      throw ParseError("duplicate mixture key '" + std::string(key) + "'");
    }
    seen[slot] = true;
    double x = 0.0;
    auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() ||
        !std::isfinite(x) || x < 0.0) {
      throw ParseError("mixture value '" + std::string(value) + "' for key '" +
                       std::string(key) + "' is not a non-negative decimal");
    }
    w[slot] = x;
    pos = end + 1;
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  if (std::abs(sum - 1.0) > kParseTolerance) {
    throw ParseError("mixture weights sum to " + std::to_string(sum) +
                     ", expected 1 within 1e-6");
  }
  // Sums that are 1 up to rounding keep the literal values as typed.
  if (std::abs(sum - 1.0) > 8 * std::numeric_limits<double>::epsilon()) {
    for (double& x : w) x /= sum;
  }
  return NoiseMixture(w);
}

std::string NoiseMixture::to_string() const {
  std::string out;
  for (size_t i = 0; i < kNumNoiseTypes; ++i) {
    if (i) out.push_back(',');
    out += noise_key(static_cast<NoiseType>(i));
    out.push_back('=');
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, weights_[i]);
    out.append(buf, ptr);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<char32_t> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ContractViolation("alphabet must not be empty");
  std::sort(symbols_.begin(), symbols_.end());
  if (std::adjacent_find(symbols_.begin(), symbols_.end()) != symbols_.end()) {
    throw ContractViolation("alphabet contains duplicate symbols");
  }
  for (char32_t c : symbols_) {
    if (utf8::is_whitespace(c)) {
      throw ContractViolation("alphabet must not contain whitespace");
    }
  }
}

Alphabet Alphabet::from_text(std::u32string_view text) {
  AlphabetBuilder builder;
  builder.add(text);
  return builder.build();
}

bool Alphabet::contains(char32_t c) const {
  return std::binary_search(symbols_.begin(), symbols_.end(), c);
}

void AlphabetBuilder::add(std::u32string_view text) {
  for (char32_t c : text) {
    if (utf8::is_whitespace(c)) continue;
    if (c < 0x10000) {
      bmp_[c] = true;
    } else if (std::find(astral_.begin(), astral_.end(), c) == astral_.end()) {
      astral_.push_back(c);
    }
  }
}

bool AlphabetBuilder::empty() const {
  return astral_.empty() && std::find(bmp_.begin(), bmp_.end(), true) == bmp_.end();
}

Alphabet AlphabetBuilder::build() const {
  std::vector<char32_t> symbols;
  for (char32_t c = 0; c < 0x10000; ++c) {
    if (bmp_[c]) symbols.push_back(c);
  }
  symbols.insert(symbols.end(), astral_.begin(), astral_.end());
  if (symbols.empty()) {
    throw ContractViolation("corpus has no non-whitespace characters");
  }
  return Alphabet(std::move(symbols));
}

// ---------------------------------------------------------------------------
// Edit operations

Token delete_char(const Token& token, size_t index) {
  if (token.size() < 2) {
    throw ContractViolation("delete_char: single-character token");
  }
  if (index >= token.size()) {
    throw ContractViolation("delete_char: index out of range");
  }
  std::u32string out = token.chars_;
  out.erase(index, 1);
  return Token(Token::Trusted{}, std::move(out));
}

Token insert_char(const Token& token, size_t gap, char32_t symbol,
                  const Alphabet& alphabet) {
  if (gap > token.size()) {
    throw ContractViolation("insert_char: gap out of range");
  }
  if (!alphabet.contains(symbol)) {
    throw ContractViolation("insert_char: symbol not in alphabet");
  }
  std::u32string out = token.chars_;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(gap), symbol);
  return Token(Token::Trusted{}, std::move(out));
}

Token substitute_char(const Token& token, size_t index, char32_t symbol) {
  if (index >= token.size()) {
    throw ContractViolation("substitute_char: index out of range");
  }
  if (token.chars_[index] == symbol) {
    throw ContractViolation("substitute_char: symbol equals existing character");
  }
  if (utf8::is_whitespace(symbol)) {
    throw ContractViolation("substitute_char: whitespace symbol");
  }
  std::u32string out = token.chars_;
  out[index] = symbol;
  return Token(Token::Trusted{}, std::move(out));
}

Token swap_chars(const Token& token, size_t index) {
  if (token.size() < 4) {
    throw ContractViolation("swap_chars: token shorter than 4 characters");
  }
  if (index < 1 || index > token.size() - 3) {
    throw ContractViolation("swap_chars: index must be in [1, len-3]");
  }
  std::u32string out = token.chars_;
  std::swap(out[index], out[index + 1]);
  return Token(Token::Trusted{}, std::move(out));
}

// ---------------------------------------------------------------------------
// Sampling

NoiseType sample_noise_type(const NoiseMixture& mixture, RandomSource& rng) {
  const double clean = mixture.weight(NoiseType::kClean);
  if (rng.uniform01() < clean) return NoiseType::kClean;
  const double noised = 1.0 - clean;
  const double u = rng.uniform01() * noised;
  double acc = 0.0;
  NoiseType last = NoiseType::kClean;
  for (NoiseType t : kNoiseOps) {
    const double w = mixture.weight(t);
    if (w <= 0.0) continue;
    acc += w;
    last = t;
    if (u < acc) return t;
  }
  // Rounding left u just above the accumulated mass.
  return last;
}

NoiseOutcome noise_token_detailed(const Token& token,
                                  const NoiseMixture& mixture,
                                  const Alphabet& alphabet, RandomSource& rng) {
  const size_t n = token.size();
  if (n == 1) return {token, NoiseType::kClean, NoiseType::kClean};
  const NoiseType drawn = sample_noise_type(mixture, rng);
  switch (drawn) {
    case NoiseType::kClean:
      break;
    case NoiseType::kDeletion:
      return {delete_char(token, rng.uniform_below(n)), drawn, drawn};
    case NoiseType::kInsertion: {
      const size_t gap = rng.uniform_below(n + 1);
      const char32_t symbol = alphabet[rng.uniform_below(alphabet.size())];
      return {insert_char(token, gap, symbol, alphabet), drawn, drawn};
    }
    case NoiseType::kSubstitution: {
      const size_t index = rng.uniform_below(n);
      const char32_t current = token.chars()[index];
      const bool member = alphabet.contains(current);
      const size_t pool = alphabet.size() - (member ? 1 : 0);
      if (pool == 0) break;
      size_t k = rng.uniform_below(pool);
      if (member && alphabet[k] >= current) ++k;
      return {substitute_char(token, index, alphabet[k]), drawn, drawn};
    }
    case NoiseType::kSwap: {
      // Interior pairs only, and only pairs whose exchange changes the token.
      const auto& c = token.chars();
      size_t pairs = 0;
      for (size_t i = 1; i + 2 < n; ++i) pairs += c[i] != c[i + 1];
      if (pairs == 0) break;
      size_t k = rng.uniform_below(pairs);
      size_t i = 1;
      for (;; ++i) {
        if (c[i] != c[i + 1] && k-- == 0) break;
      }
      return {swap_chars(token, i), drawn, drawn};
    }
  }
  return {token, drawn, NoiseType::kClean};
}

}  // namespace nmtnoise
