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

#include "core/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "json.hpp"

namespace nmtnoise {
namespace {

using NgramCounts = std::unordered_map<std::string, uint64_t>;

// Tokens never contain a space, so space-joined n-grams are unambiguous.
NgramCounts count_ngrams(const std::vector<std::string_view>& tokens, int n) {
  NgramCounts counts;
  if (tokens.size() < static_cast<size_t>(n)) return counts;
  std::string key;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    key.clear();
    for (int k = 0; k < n; ++k) {
      if (k) key.push_back(' ');
      key.append(tokens[i + k]);
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuCounts& BleuCounts::operator+=(const BleuCounts& o) {
  for (int n = 0; n < kBleuOrder; ++n) {
    matches[n] += o.matches[n];
    totals[n] += o.totals[n];
  }
  hypothesis_length += o.hypothesis_length;
  reference_length += o.reference_length;
  return *this;
}

BleuCounts sentence_counts(std::string_view hypothesis,
                           std::string_view reference) {
  const auto hyp = split_tokens(hypothesis);
  const auto ref = split_tokens(reference);
  if (ref.empty()) throw ContractViolation("empty reference line");
  BleuCounts c;
  c.hypothesis_length = hyp.size();
  c.reference_length = ref.size();
  for (int n = 1; n <= kBleuOrder; ++n) {
    const NgramCounts ref_counts = count_ngrams(ref, n);
    const NgramCounts hyp_counts = count_ngrams(hyp, n);
    uint64_t matched = 0;
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    c.matches[n - 1] = matched;
    c.totals[n - 1] = hyp.size() >= static_cast<size_t>(n) ? hyp.size() - n + 1 : 0;
  }
  return c;
}

BleuReport bleu_from_counts(const BleuCounts& counts, BleuOptions options) {
  BleuReport r;
  r.hypothesis_length = counts.hypothesis_length;
  r.reference_length = counts.reference_length;
  const double c = static_cast<double>(std::max<uint64_t>(counts.hypothesis_length, 1));
  const double ref = static_cast<double>(counts.reference_length);
  r.brevity_penalty = c < ref ? std::exp(1.0 - ref / c) : 1.0;

  double log_sum = 0.0;
  bool zero = counts.hypothesis_length == 0;
  for (int n = 0; n < kBleuOrder; ++n) {
    double m = static_cast<double>(counts.matches[n]);
    double t = static_cast<double>(counts.totals[n]);
    if (options.smooth && n > 0) {
      m += 1.0;
      t += 1.0;
    }
    r.precisions[n] = t > 0.0 ? m / t : 0.0;
    if (r.precisions[n] <= 0.0) {
      zero = true;
    } else {
      log_sum += std::log(r.precisions[n]);
    }
  }
  r.bleu = zero ? 0.0
                : 100.0 * r.brevity_penalty * std::exp(log_sum / kBleuOrder);
  return r;
}

BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::string>& references,
                       BleuOptions options) {
  if (hypotheses.size() != references.size()) {
    throw ContractViolation("line count mismatch: " +
                            std::to_string(hypotheses.size()) +
                            " hypotheses vs " +
                            std::to_string(references.size()) + " references");
  }
  BleuCounts total;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    try {
      total += sentence_counts(hypotheses[i], references[i]);
    } catch (const ContractViolation& e) {
      throw ContractViolation("line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return bleu_from_counts(total, options);
}

std::string BleuReport::to_json() const {
  nlohmann::json j;
  j["bleu"] = bleu;
  j["precisions"] = precisions;
  j["bp"] = brevity_penalty;
  j["hyp_len"] = hypothesis_length;
  j["ref_len"] = reference_length;
  return j.dump();
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

void ConditionScorer::register_baseline(const std::string& key, double bleu) {
  baselines_[key] = bleu;
}

std::optional<double> ConditionScorer::baseline(const std::string& key) const {
  auto it = baselines_.find(key);
  if (it == baselines_.end()) return std::nullopt;
  return it->second;
}

ScoredCondition ConditionScorer::score_report(
    const BleuReport& report, ScoredCondition metadata,
    const std::optional<std::string>& baseline_key) const {
  metadata.report = report;
  if (baseline_key) {
    const auto base = baseline(*baseline_key);
    if (!base) {
      throw ContractViolation("no baseline registered for '" + *baseline_key +
                              "'");
    }
    metadata.baseline_bleu = *base;
    metadata.delta = round2(round2(report.bleu) - round2(*base));
  }
  return metadata;
}

ScoredCondition ConditionScorer::score(
    const std::vector<std::string>& translations,
    const std::vector<std::string>& references, ScoredCondition metadata,
    const std::optional<std::string>& baseline_key, BleuOptions options) const {
  return score_report(corpus_bleu(translations, references, options),
                      std::move(metadata), baseline_key);
}

}  // namespace nmtnoise
