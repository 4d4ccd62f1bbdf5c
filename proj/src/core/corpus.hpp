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

// Streaming corpus handling: whitespace tokenization, whole-corpus synthetic
// noising, and per-epoch regeneration.
//
// Every token's randomness is a function of (base_seed, epoch, line_index,
// token_index) only, never of processing order, so threaded and sequential
// runs produce the same bytes.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/noise.hpp"

namespace nmtnoise {

// Splits on runs of Unicode whitespace. Views point into `line`. Throws
// ParseError on invalid UTF-8.
std::vector<std::string_view> split_tokens(std::string_view line);

struct CorpusLine {
  uint64_t line_index = 0;
  std::vector<Token> tokens;

  // Tokens joined by single spaces.
  std::string reassemble() const;
};

CorpusLine tokenize(std::string_view line, uint64_t line_index = 0);

// Reads one line without its terminator ('\n', and a preceding '\r').
// Returns false at end of input.
bool read_line(std::istream& in, std::string& line);

std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines);

// Output file that only appears at its final path once commit() succeeds.
// Until then data goes to a temporary sibling, removed on destruction.
class AtomicOutputFile {
 public:
  explicit AtomicOutputFile(std::filesystem::path target);
  ~AtomicOutputFile();
  AtomicOutputFile(const AtomicOutputFile&) = delete;
  AtomicOutputFile& operator=(const AtomicOutputFile&) = delete;

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

// One experimental condition for synthetic noising.
struct NoisingPlan {
  std::string name;
  NoiseMixture mixture;
  uint64_t base_seed = 0;
  uint64_t epoch = 0;
};

struct SyntheticStats {
  uint64_t total_tokens = 0;
  std::array<uint64_t, kNumNoiseTypes> applied{};  // indexed by NoiseType

  uint64_t noised_tokens() const { return total_tokens - applied[0]; }
  SyntheticStats& operator+=(const SyntheticStats& o);
  std::string to_json() const;
};

// Noises a single corpus line. Output tokens are joined with single spaces.
std::string noise_line(std::string_view line, uint64_t line_index,
                       const NoisingPlan& plan, const Alphabet& alphabet,
                       SyntheticStats* stats = nullptr);

std::vector<std::string> noise_corpus(const std::vector<std::string>& corpus,
                                      const NoisingPlan& plan,
                                      const Alphabet& alphabet,
                                      SyntheticStats* stats = nullptr);

// One noised corpus per epoch plan.epoch, plan.epoch + 1, ...; element k is
// identical to noise_corpus with plan.epoch + k.
std::vector<std::vector<std::string>> epoch_stream(
    const std::vector<std::string>& corpus, const NoisingPlan& plan,
    uint64_t epochs, const Alphabet& alphabet);

// Alphabet of every non-whitespace scalar in `corpus`.
Alphabet corpus_alphabet(const std::vector<std::string>& corpus);
// Streaming variant over a file.
Alphabet file_alphabet(const std::filesystem::path& path);

// Streams `in` to `out`. With threads > 1, lines are processed in batches by
// a worker pool and written back in input order; memory is bounded by the
// batch, not the corpus.
SyntheticStats noise_stream(std::istream& in, std::ostream& out,
                            const NoisingPlan& plan, const Alphabet& alphabet,
                            unsigned threads = 1);

// `alphabet_file` empty selects the automatic alphabet of `in`.
SyntheticStats noise_file(const std::filesystem::path& in,
                          const std::filesystem::path& out,
                          const NoisingPlan& plan,
                          const std::optional<Alphabet>& alphabet,
                          unsigned threads = 1);

// `<out>.epoch<e>` for each epoch e in [plan.epoch, plan.epoch + count).
std::vector<std::filesystem::path> epoch_files(
    const std::filesystem::path& in, const std::filesystem::path& out,
    const NoisingPlan& plan, uint64_t count,
    const std::optional<Alphabet>& alphabet, unsigned threads = 1);

}  // namespace nmtnoise
