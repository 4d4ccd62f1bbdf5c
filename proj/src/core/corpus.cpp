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

#include "core/corpus.hpp"

#include <unistd.h>

#include <atomic>
#include <istream>
#include <ostream>
#include <thread>

#include "core/errors.hpp"
#include "core/utf8.hpp"

namespace nmtnoise {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t start = std::string_view::npos;
  size_t pos = 0;
  while (pos < line.size()) {
    const size_t at = pos;
    const auto c = utf8::next_scalar(line, pos);
    if (!c) {
      throw ParseError("invalid UTF-8 at byte offset " + std::to_string(at));
    }
    if (utf8::is_whitespace(*c)) {
      if (start != std::string_view::npos) {
        tokens.push_back(line.substr(start, at - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = at;
    }
  }
  if (start != std::string_view::npos) tokens.push_back(line.substr(start));
  return tokens;
}

std::string CorpusLine::reassemble() const {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].to_utf8();
  }
  return out;
}

CorpusLine tokenize(std::string_view line, uint64_t line_index) {
  CorpusLine result{line_index, {}};
  for (std::string_view t : split_tokens(line)) {
    result.tokens.push_back(Token::from_utf8(t));
  }
  return result;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<std::string> lines;
  std::string line;
  while (read_line(in, line)) lines.push_back(line);
  if (in.bad()) throw IoError("read error on " + path.string());
  return lines;
}

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  AtomicOutputFile out(path);
  for (const auto& l : lines) out.stream() << l << '\n';
  out.commit();
}

// ---------------------------------------------------------------------------
// AtomicOutputFile

AtomicOutputFile::AtomicOutputFile(std::filesystem::path target)
    : target_(std::move(target)) {
  temp_ = target_;
  temp_ += ".tmp." + std::to_string(::getpid()) + "." +
           std::to_string(reinterpret_cast<uintptr_t>(this));
  out_.open(temp_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + target_.string() + " for writing");
}

AtomicOutputFile::~AtomicOutputFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
  }
}

void AtomicOutputFile::commit() {
  out_.flush();
  if (!out_) throw IoError("write error on " + target_.string());
  out_.close();
  std::error_code ec;
  std::filesystem::rename(temp_, target_, ec);
  if (ec) {
    throw IoError("cannot move output into place at " + target_.string() +
                  ": " + ec.message());
  }
  committed_ = true;
}

// ---------------------------------------------------------------------------
// Synthetic noising

SyntheticStats& SyntheticStats::operator+=(const SyntheticStats& o) {
  total_tokens += o.total_tokens;
  for (size_t i = 0; i < kNumNoiseTypes; ++i) applied[i] += o.applied[i];
  return *this;
}

std::string SyntheticStats::to_json() const {
  std::string out = "{\"total_tokens\":" + std::to_string(total_tokens) +
                    ",\"noised_tokens\":" + std::to_string(noised_tokens()) +
                    ",\"applied\":{";
  for (size_t i = 0; i < kNumNoiseTypes; ++i) {
    if (i) out.push_back(',');
    out += "\"" + std::string(noise_key(static_cast<NoiseType>(i))) +
           "\":" + std::to_string(applied[i]);
  }
  return out + "}}";
}

std::string noise_line(std::string_view line, uint64_t line_index,
                       const NoisingPlan& plan, const Alphabet& alphabet,
                       SyntheticStats* stats) {
  std::string out;
  out.reserve(line.size() + 8);
  const auto tokens = split_tokens(line);
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    RandomSource rng = derive_seed(plan.base_seed, plan.epoch, line_index, i);
    const auto outcome = noise_token_detailed(Token::from_utf8(tokens[i]),
                                              plan.mixture, alphabet, rng);
    if (outcome.applied == NoiseType::kClean) {
      out += tokens[i];
    } else {
      out += outcome.token.to_utf8();
    }
    if (stats) {
      ++stats->total_tokens;
      ++stats->applied[static_cast<size_t>(outcome.applied)];
    }
  }
  return out;
}

std::vector<std::string> noise_corpus(const std::vector<std::string>& corpus,
                                      const NoisingPlan& plan,
                                      const Alphabet& alphabet,
                                      SyntheticStats* stats) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    out.push_back(noise_line(corpus[i], i, plan, alphabet, stats));
  }
  return out;
}

std::vector<std::vector<std::string>> epoch_stream(
    const std::vector<std::string>& corpus, const NoisingPlan& plan,
    uint64_t epochs, const Alphabet& alphabet) {
  if (epochs < 1) throw ContractViolation("epoch count must be >= 1");
  std::vector<std::vector<std::string>> out;
  out.reserve(epochs);
  NoisingPlan p = plan;
  for (uint64_t k = 0; k < epochs; ++k) {
    p.epoch = plan.epoch + k;
    out.push_back(noise_corpus(corpus, p, alphabet));
  }
  return out;
}

Alphabet corpus_alphabet(const std::vector<std::string>& corpus) {
  AlphabetBuilder builder;
  for (const auto& line : corpus) builder.add(utf8::decode(line));
  return builder.build();
}

Alphabet file_alphabet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  AlphabetBuilder builder;
  std::string line;
  uint64_t n = 0;
  while (read_line(in, line)) {
    ++n;
    try {
      builder.add(utf8::decode(line));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": " +
                       e.what());
    }
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  return builder.build();
}

namespace {

constexpr size_t kBatchLines = 4096;

void rethrow_with_line(const ParseError& e, uint64_t line_index) {
  throw ParseError("line " + std::to_string(line_index + 1) + ": " + e.what());
}

}  // namespace

SyntheticStats noise_stream(std::istream& in, std::ostream& out,
                            const NoisingPlan& plan, const Alphabet& alphabet,
                            unsigned threads) {
  SyntheticStats total;
  std::string line;
  uint64_t index = 0;
  if (threads <= 1) {
    while (read_line(in, line)) {
      try {
        out << noise_line(line, index, plan, alphabet, &total) << '\n';
      } catch (const ParseError& e) {
        rethrow_with_line(e, index);
      }
      ++index;
    }
  } else {
    std::vector<std::string> batch;
    std::vector<std::string> results;
    batch.reserve(kBatchLines);
    bool more = true;
    while (more) {
      batch.clear();
      while (batch.size() < kBatchLines && (more = read_line(in, line))) {
        batch.push_back(line);
      }
      if (batch.empty()) break;
      results.assign(batch.size(), {});
      std::vector<SyntheticStats> worker_stats(threads);
      std::atomic<size_t> cursor{0};
      std::atomic<int64_t> failed_at{-1};
      std::string failure;
      {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
          pool.emplace_back([&, w] {
            for (size_t i; (i = cursor.fetch_add(1)) < batch.size();) {
              try {
                results[i] = noise_line(batch[i], index + i, plan, alphabet,
                                        &worker_stats[w]);
              } catch (const ParseError& e) {
                int64_t expected = -1;
                if (failed_at.compare_exchange_strong(
                        expected, static_cast<int64_t>(i))) {
                  failure = e.what();
                }
              }
            }
          });
        }
      }
      if (failed_at >= 0) {
        rethrow_with_line(ParseError(failure),
                          index + static_cast<uint64_t>(failed_at.load()));
      }
      for (const auto& s : worker_stats) total += s;
      for (const auto& r : results) out << r << '\n';
      index += batch.size();
    }
  }
  if (in.bad()) throw IoError("read error on corpus input");
  if (!out) throw IoError("write error on corpus output");
  return total;
}

SyntheticStats noise_file(const std::filesystem::path& in,
                          const std::filesystem::path& out,
                          const NoisingPlan& plan,
                          const std::optional<Alphabet>& alphabet,
                          unsigned threads) {
  const Alphabet used = alphabet ? *alphabet : file_alphabet(in);
  std::ifstream src(in, std::ios::binary);
  if (!src) throw IoError("cannot open " + in.string() + " for reading");
  AtomicOutputFile dst(out);
  SyntheticStats stats;
  try {
    stats = noise_stream(src, dst.stream(), plan, used, threads);
  } catch (const ParseError& e) {
    throw ParseError(in.string() + ": " + e.what());
  }
  dst.commit();
  return stats;
}

std::vector<std::filesystem::path> epoch_files(
    const std::filesystem::path& in, const std::filesystem::path& out,
    const NoisingPlan& plan, uint64_t count,
    const std::optional<Alphabet>& alphabet, unsigned threads) {
  if (count < 1) throw ContractViolation("epoch count must be >= 1");
  const Alphabet used = alphabet ? *alphabet : file_alphabet(in);
  std::vector<std::filesystem::path> written;
  NoisingPlan p = plan;
  for (uint64_t k = 0; k < count; ++k) {
    p.epoch = plan.epoch + k;
    std::filesystem::path target = out;
    target += ".epoch" + std::to_string(p.epoch);
    noise_file(in, target, p, used, threads);
    written.push_back(std::move(target));
  }
  return written;
}

}  // namespace nmtnoise
