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

#include "core/natural_noise.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "core/utf8.hpp"

namespace nmtnoise {
namespace {

void check_form(const std::string& form) {
  if (form.empty()) throw ContractViolation("empty lexicon form");
  if (!utf8::is_valid(form)) {
    throw ContractViolation("lexicon form is not valid UTF-8");
  }
  const auto parts = split_tokens(form);
  if (parts.size() != 1 || parts[0].size() != form.size()) {
    throw ContractViolation("lexicon form '" + form + "' contains whitespace");
  }
}

}  // namespace

void ErrorLexicon::add(const std::string& clean,
                       const std::vector<std::string>& errors) {
  check_form(clean);
  if (errors.empty()) {
    throw ContractViolation("clean form '" + clean + "' has no error forms");
  }
  for (const auto& e : errors) {
    check_form(e);
    if (e == clean) {
      throw ContractViolation("error form equals clean form '" + clean + "'");
    }
  }
  auto& list = entries_[clean];
  for (const auto& e : errors) {
    if (std::find(list.begin(), list.end(), e) == list.end()) list.push_back(e);
  }
}

const std::vector<std::string>* ErrorLexicon::find(std::string_view clean) const {
  auto it = entries_.find(clean);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ErrorLexicon::digest() const {
  std::vector<const std::pair<const std::string, std::vector<std::string>>*>
      sorted;
  sorted.reserve(entries_.size());
  for (const auto& kv : entries_) sorted.push_back(&kv);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->first < b->first; });
  uint64_t h = 0xCBF29CE484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
  };
  for (const auto* kv : sorted) {
    feed(kv->first);
    for (const auto& e : kv->second) {
      feed("\t");
      feed(e);
    }
    feed("\n");
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

ErrorLexicon load_lexicon(std::istream& in, std::string_view source_name) {
  ErrorLexicon lexicon;
  std::string line;
  uint64_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(std::string(source_name) + ":" + std::to_string(line_no) +
                     ": " + why);
  };
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
      const size_t tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string::npos
                                            ? std::string::npos
                                            : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (fields.size() < 2) fail("expected clean form followed by error forms");
    for (size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].empty()) fail("empty field in column " + std::to_string(i + 1));
    }
    std::vector<std::string> errors(fields.begin() + 1, fields.end());
    try {
      lexicon.add(fields[0], errors);
    } catch (const ContractViolation& e) {
      fail(e.what());
    }
  }
  if (in.bad()) throw IoError("read error on " + std::string(source_name));
  return lexicon;
}

ErrorLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  return load_lexicon(in, path.string());
}

void NaturalNoiseConfig::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ContractViolation("noise probability must be in [0, 1]");
  }
}

std::string InjectionStats::to_json() const {
  return "{\"total_tokens\":" + std::to_string(total_tokens) +
         ",\"eligible_tokens\":" + std::to_string(eligible_tokens) +
         ",\"noised_tokens\":" + std::to_string(noised_tokens) + "}";
}

Injection inject_natural_noise(std::string_view token,
                               const ErrorLexicon& lexicon, double probability,
                               RandomSource& rng) {
  const auto* errors = lexicon.find(token);
  if (errors == nullptr) return {std::string(token), false};
  if (!(rng.uniform01() < probability)) return {std::string(token), false};
  return {(*errors)[rng.uniform_below(errors->size())], true};
}

RandomSource natural_seed(uint64_t seed, uint64_t line_index,
                          uint64_t token_index) {
  return RandomSource(seed)
      .derive(kNaturalDomain)
      .derive(line_index)
      .derive(token_index);
}

std::string inject_line(std::string_view line, uint64_t line_index,
                        const ErrorLexicon& lexicon,
                        const NaturalNoiseConfig& config,
                        InjectionStats& stats) {
  std::string out;
  out.reserve(line.size() + 8);
  const auto tokens = split_tokens(line);
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    ++stats.total_tokens;
    const auto* errors = lexicon.find(tokens[i]);
    if (errors == nullptr) {
      out += tokens[i];
      continue;
    }
    ++stats.eligible_tokens;
    RandomSource rng = natural_seed(config.seed, line_index, i);
    const Injection inj =
        inject_natural_noise(tokens[i], lexicon, config.probability, rng);
    if (inj.was_noised) ++stats.noised_tokens;
    out += inj.token;
  }
  return out;
}

NaturalNoiseResult noise_corpus_naturally(const std::vector<std::string>& corpus,
                                          const ErrorLexicon& lexicon,
                                          const NaturalNoiseConfig& config) {
  config.validate();
  NaturalNoiseResult result;
  result.lines.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    try {
      result.lines.push_back(
          inject_line(corpus[i], i, lexicon, config, result.stats));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return result;
}

InjectionStats noise_stream_naturally(std::istream& in, std::ostream& out,
                                      const ErrorLexicon& lexicon,
                                      const NaturalNoiseConfig& config) {
  config.validate();
  InjectionStats stats;
  std::string line;
  uint64_t index = 0;
  while (read_line(in, line)) {
    try {
      out << inject_line(line, index, lexicon, config, stats) << '\n';
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(index + 1) + ": " + e.what());
    }
    ++index;
  }
  if (in.bad()) throw IoError("read error on corpus input");
  if (!out) throw IoError("write error on corpus output");
  return stats;
}

InjectionStats noise_file_naturally(const std::filesystem::path& in,
                                    const std::filesystem::path& out,
                                    const ErrorLexicon& lexicon,
                                    const NaturalNoiseConfig& config) {
  std::ifstream src(in, std::ios::binary);
  if (!src) throw IoError("cannot open " + in.string() + " for reading");
  AtomicOutputFile dst(out);
  InjectionStats stats;
  try {
    stats = noise_stream_naturally(src, dst.stream(), lexicon, config);
  } catch (const ParseError& e) {
    throw ParseError(in.string() + ": " + e.what());
  }
  dst.commit();
  return stats;
}

}  // namespace nmtnoise
