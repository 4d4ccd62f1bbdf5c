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

// Evaluation protocol: noise-probability sweeps, ablation plan sets, and the
// report records and tables they produce.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/backend.hpp"
#include "core/bleu.hpp"
#include "core/corpus.hpp"
#include "core/natural_noise.hpp"
#include "core/noise.hpp"

namespace nmtnoise {

enum class AblationRole {
  kNoNoise,   // baseline for additions
  kAddition,  // one noise type alone
  kAllNoise,  // baseline for removals
  kRemoval,   // all noise types but one
};

struct AblationPlan {
  NoisingPlan plan;  // plan.name is the table label, e.g. "+ Deletion"
  AblationRole role = AblationRole::kNoNoise;
  std::optional<NoiseType> type;  // the added or removed type
  std::string slug;               // filesystem-safe name, e.g. "minus-swap"
};

// No-noise, four additions, all-noise, four removals, in that order.
struct AblationPlanSet {
  std::vector<AblationPlan> plans;
};

// Additions keep the default's weight for their type and put the rest on
// Clean. Removals zero one type; by default its mass moves to Clean, with
// `renormalize` the remaining types are scaled up so Clean keeps the
// default's weight.
AblationPlanSet build_ablation_plans(const NoiseMixture& default_mixture = {},
                                     uint64_t base_seed = 0,
                                     bool renormalize = false);

// Everything needed to re-run one condition byte-identically, plus its score.
struct ConditionRecord {
  std::string kind;  // "natural", "synthetic", "ablation"
  ScoredCondition scored;
  uint64_t seed = 0;
  std::optional<std::string> mixture;         // synthetic and ablation
  std::optional<std::string> lexicon_digest;  // natural
  std::string role;                           // ablation only
  std::string backend;
  uint64_t total_tokens = 0;
  uint64_t eligible_tokens = 0;
  uint64_t noised_tokens = 0;
  bool ok = true;
  std::string error;
};

struct SweepSpec {
  std::vector<double> probabilities{0.0, 0.0625, 0.25, 1.0};
  uint64_t seed = 0;
  std::string dataset = "test";

  // Throws ContractViolation unless strictly increasing within [0, 1].
  void validate() const;
};

struct RunOptions {
  // Baseline BLEU by baseline_key, e.g. from a sweep of a model trained
  // without noise. When set, every condition must have one.
  std::optional<ConditionScorer> baselines;
  // Run conditions concurrently, each backend in its own temporary
  // working directory.
  bool parallel = false;
  BleuOptions bleu;
};

// Natural-noise sweep: for each probability, inject lexicon errors into the
// test source, translate, score against the references.
std::vector<ConditionRecord> run_sweep(const std::vector<std::string>& test,
                                       const std::vector<std::string>& references,
                                       const SweepSpec& spec,
                                       const ErrorLexicon& lexicon,
                                       const TranslatorBackend& backend,
                                       const RunOptions& options = {});

// Synthetic-noise sweep. Probability p maps to the mixture with Clean 1 - p
// and p/4 on each noise type.
std::vector<ConditionRecord> run_synthetic_sweep(
    const std::vector<std::string>& test,
    const std::vector<std::string>& references, const SweepSpec& spec,
    const Alphabet& alphabet, const TranslatorBackend& backend,
    const RunOptions& options = {});

NoiseMixture synthetic_sweep_mixture(double probability);

// Translates the test set once per plan (the backend sees the plan through
// {plan}, {slug} and {mix} in its command and NMTNOISE_PLAN, NMTNOISE_SLUG,
// NMTNOISE_MIX in its environment) and scores it. Additions take their
// delta against the no-noise row, removals against the all-noise row.
std::vector<ConditionRecord> run_ablation(
    const std::vector<std::string>& test,
    const std::vector<std::string>& references, const AblationPlanSet& plans,
    const TranslatorBackend& backend, const RunOptions& options = {});

// Condition name used by sweeps: "<kind> p=<probability>".
std::string sweep_condition_name(const std::string& kind, double probability);

// Report JSON: an array of condition records.
std::string report_to_json(const std::vector<ConditionRecord>& records);
std::vector<ConditionRecord> report_from_json(const std::string& json);

// Key under which a condition's baseline is looked up: "<dataset>/<name>".
std::string baseline_key(const ScoredCondition& condition);

// Registers every successful record's BLEU under its baseline_key.
ConditionScorer baselines_from_report(const std::vector<ConditionRecord>& records);

// Recomputes delta and baseline_bleu for every successful record from
// `baselines`, keyed by baseline_key. Records without a baseline keep none.
std::vector<ConditionRecord> attach_baselines(std::vector<ConditionRecord> records,
                                              const ConditionScorer& baselines);

// Aligned text tables. Ablation reports render as
//   Training Noise      BLEU      Δ
//   No Training Noise  12.49
//   + Deletion         17.39   4.90
// and sweeps as Dataset / Noise Probability / Noised Tokens / BLEU columns.
std::string render_table(const std::vector<ConditionRecord>& records);

}  // namespace nmtnoise
