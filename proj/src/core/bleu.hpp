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

// Corpus-level BLEU-4: case-sensitive, whitespace tokens, uniform weights,
// clipped n-gram precisions and exponential brevity penalty, one reference
// per hypothesis.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmtnoise {

inline constexpr int kBleuOrder = 4;

// Sufficient statistics. Counts from disjoint line shards add up to the
// counts of the whole corpus.
struct BleuCounts {
  std::array<uint64_t, kBleuOrder> matches{};
  std::array<uint64_t, kBleuOrder> totals{};
  uint64_t hypothesis_length = 0;
  uint64_t reference_length = 0;

  BleuCounts& operator+=(const BleuCounts& o);
};

struct BleuReport {
  double bleu = 0.0;  // in [0, 100]
  std::array<double, kBleuOrder> precisions{};
  double brevity_penalty = 1.0;
  uint64_t hypothesis_length = 0;
  uint64_t reference_length = 0;

  // {"bleu":..,"precisions":[..],"bp":..,"hyp_len":..,"ref_len":..}
  std::string to_json() const;
};

struct BleuOptions {
  // Add one to matches and totals for n >= 2. Off by default; without it a
  // zero precision at any order gives BLEU 0.
  bool smooth = false;
};

// Throws ContractViolation on an empty reference line.
BleuCounts sentence_counts(std::string_view hypothesis,
                           std::string_view reference);

// hypothesis_length == 0 yields BLEU 0 with brevity penalty e^(1 - r), the
// value at one token, so the penalty stays in (0, 1].
BleuReport bleu_from_counts(const BleuCounts& counts, BleuOptions options = {});

// Throws ContractViolation when the line counts differ (the message names
// both) or a reference line is empty.
BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references,
                       BleuOptions options = {});

// One row of a result table.
struct ScoredCondition {
  std::string name;
  std::string dataset;
  double noise_probability = 0.0;
  double noised_fraction = 0.0;
  BleuReport report;
  std::optional<double> baseline_bleu;
  std::optional<double> delta;
};

// Rounds to two decimals, the precision BLEU is reported at.
double round2(double x);

// Holds baseline BLEU values under string keys (a dataset, or a condition
// name) and attaches deltas to conditions. Deltas are computed on the
// reported two-decimal values, delta = round2(round2(bleu) - round2(base)),
// so every delta can be reproduced from the printed columns.
class ConditionScorer {
 public:
  void register_baseline(const std::string& key, double bleu);
  std::optional<double> baseline(const std::string& key) const;
  bool empty() const { return baselines_.empty(); }

  // With a baseline_key, attaches baseline_bleu and delta; throws
  // ContractViolation when that key has no registered baseline.
  ScoredCondition score(const std::vector<std::string>& translations,
                        const std::vector<std::string>& references,
                        ScoredCondition metadata,
                        const std::optional<std::string>& baseline_key,
                        BleuOptions options = {}) const;

  // Same, from an already computed report.
  ScoredCondition score_report(const BleuReport& report,
                               ScoredCondition metadata,
                               const std::optional<std::string>& baseline_key) const;

 private:
  std::map<std::string, double> baselines_;
};

}  // namespace nmtnoise
