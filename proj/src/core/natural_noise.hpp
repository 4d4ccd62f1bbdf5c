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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/random.hpp"

namespace nmtnoise {

// Clean form -> distinct error forms. Matching is exact and case-sensitive.
class ErrorLexicon {
 public:
  ErrorLexicon() = default;

  // Merges `errors` into the entry for `clean`, skipping forms already
  // present. Throws ContractViolation if an error form equals `clean`, or if
  // any form is empty or contains whitespace.
  void add(const std::string& clean, const std::vector<std::string>& errors);

  // nullptr when `clean` has no entry.
  const std::vector<std::string>* find(std::string_view clean) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // FNV-1a over the entries in sorted order: "clean\terr\terr\n" per entry.
  // Independent of file order and duplicate merging.
  std::string digest() const;

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, std::vector<std::string>, Hash,
                     std::equal_to<>>
      entries_;
};

// TSV: column 1 clean form, columns 2..n error forms; '#' lines and blank
// lines are skipped; a trailing '\r' is stripped. Throws ParseError naming
// `source_name` and the 1-based line number for a malformed line.
ErrorLexicon load_lexicon(std::istream& in, std::string_view source_name);
ErrorLexicon load_lexicon(const std::filesystem::path& path);

struct NaturalNoiseConfig {
  double probability = 0.0;  // per eligible token, in [0, 1]
  uint64_t seed = 0;

  // Throws ContractViolation when probability is outside [0, 1].
  void validate() const;
};

struct InjectionStats {
  uint64_t total_tokens = 0;
  uint64_t eligible_tokens = 0;
  uint64_t noised_tokens = 0;

  InjectionStats& operator+=(const InjectionStats& o) {
    total_tokens += o.total_tokens;
    eligible_tokens += o.eligible_tokens;
    noised_tokens += o.noised_tokens;
    return *this;
  }
  double noised_fraction() const {
    return total_tokens ? static_cast<double>(noised_tokens) / total_tokens
                        : 0.0;
  }
  // {"total_tokens":N,"eligible_tokens":N,"noised_tokens":N}
  std::string to_json() const;
};

struct Injection {
  std::string token;
  bool was_noised = false;
};

// Tokens without an entry come back unchanged and consume no randomness.
// Otherwise one Bernoulli(probability) draw decides, and a second uniform
// draw picks the error form.
Injection inject_natural_noise(std::string_view token,
                               const ErrorLexicon& lexicon, double probability,
                               RandomSource& rng);

// Stream for token `token_index` of line `line_index` under `seed`.
RandomSource natural_seed(uint64_t seed, uint64_t line_index,
                          uint64_t token_index);

// Injects natural noise into one line; tokens are re-joined with single
// spaces. Adds this line's tallies to `stats`.
std::string inject_line(std::string_view line, uint64_t line_index,
                        const ErrorLexicon& lexicon,
                        const NaturalNoiseConfig& config,
                        InjectionStats& stats);

struct NaturalNoiseResult {
  std::vector<std::string> lines;
  InjectionStats stats;
};

NaturalNoiseResult noise_corpus_naturally(const std::vector<std::string>& corpus,
                                          const ErrorLexicon& lexicon,
                                          const NaturalNoiseConfig& config);

// Streams `in` to `out` line by line. Throws ParseError on invalid UTF-8.
InjectionStats noise_stream_naturally(std::istream& in, std::ostream& out,
                                      const ErrorLexicon& lexicon,
                                      const NaturalNoiseConfig& config);

// File variant: the output is written to a temporary sibling and renamed into
// place only on success, so a failure never leaves a partial file.
InjectionStats noise_file_naturally(const std::filesystem::path& in,
                                    const std::filesystem::path& out,
                                    const ErrorLexicon& lexicon,
                                    const NaturalNoiseConfig& config);

}  // namespace nmtnoise
