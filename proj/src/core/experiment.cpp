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

#include "core/experiment.hpp"

#include <stdlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <future>

#include "core/errors.hpp"
#include "core/utf8.hpp"
#include "json.hpp"

namespace nmtnoise {
namespace {

using nlohmann::json;

std::string shortest(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string fixed2(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round2(x) == 0.0 ? 0.0 : x);
  return buf;
}

std::string percent2(double fraction) { return fixed2(fraction * 100.0) + "%"; }

std::string_view role_name(AblationRole role) {
  switch (role) {
    case AblationRole::kNoNoise: return "no-noise";
    case AblationRole::kAddition: return "addition";
    case AblationRole::kAllNoise: return "all-noise";
    case AblationRole::kRemoval: return "removal";
  }
  return "?";
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Scratch directory for one condition in parallel mode.
class ScratchDir {
 public:
  explicit ScratchDir(bool enabled) {
    if (!enabled) return;
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "nmtnoise-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      throw IoError("cannot create scratch directory");
    }
    path_ = tmpl;
  }
  ~ScratchDir() {
    if (path_.empty()) return;
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void check_aligned(const std::vector<std::string>& test,
                   const std::vector<std::string>& references) {
  if (test.size() != references.size()) {
    throw ContractViolation("line count mismatch: " +
                            std::to_string(test.size()) + " test lines vs " +
                            std::to_string(references.size()) + " references");
  }
}

void check_baselines(const RunOptions& options,
                     const std::vector<ConditionRecord>& templates) {
  if (!options.baselines) return;
  for (const auto& t : templates) {
    if (!options.baselines->baseline(baseline_key(t.scored))) {
      throw ContractViolation("baseline report has no condition '" +
                              baseline_key(t.scored) + "'");
    }
  }
}

// Runs each job (sequentially or concurrently) and returns records in job
// order. A job that throws nmtnoise::Error yields a failed record built from
// its template.
std::vector<ConditionRecord> run_conditions(
    std::vector<ConditionRecord> templates,
    const std::function<void(ConditionRecord&, const TranslateContext&)>& job,
    bool parallel) {
  auto run_one = [&job, parallel](ConditionRecord record) {
    try {
      ScratchDir scratch(parallel);
      TranslateContext ctx;
      ctx.working_directory = scratch.path();
      job(record, ctx);
    } catch (const Error& e) {
      record.ok = false;
      record.error = e.what();
    }
    return record;
  };
  std::vector<ConditionRecord> out;
  out.reserve(templates.size());
  if (!parallel) {
    for (auto& t : templates) out.push_back(run_one(std::move(t)));
    return out;
  }
  std::vector<std::future<ConditionRecord>> futures;
  for (auto& t : templates) {
    futures.push_back(std::async(std::launch::async, run_one, std::move(t)));
  }
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Plans

AblationPlanSet build_ablation_plans(const NoiseMixture& default_mixture,
                                     uint64_t base_seed, bool renormalize) {
  AblationPlanSet set;
  auto add = [&](std::string label, std::string slug, AblationRole role,
                 std::optional<NoiseType> type, NoiseMixture mixture) {
    set.plans.push_back(
        {NoisingPlan{std::move(label), mixture, base_seed, 0}, role, type,
         std::move(slug)});
  };
  const auto& w = default_mixture.weights();
  constexpr size_t kClean = 0;

  add("No Training Noise", "no-noise", AblationRole::kNoNoise, std::nullopt,
      NoiseMixture::only(NoiseType::kClean));
  for (NoiseType t : kNoiseOps) {
    const size_t i = static_cast<size_t>(t);
    std::array<double, kNumNoiseTypes> m{};
    m[i] = w[i];
    m[kClean] = 1.0 - w[i];
    add("+ " + std::string(noise_name(t)), "plus-" + lowercase(noise_name(t)),
        AblationRole::kAddition, t, NoiseMixture::from_weights(m));
  }
  add("All Training Noise", "all-noise", AblationRole::kAllNoise, std::nullopt,
      default_mixture);
  for (NoiseType t : kNoiseOps) {
    const size_t i = static_cast<size_t>(t);
    std::array<double, kNumNoiseTypes> m = w;
    const double rest = 1.0 - w[kClean] - w[i];
    if (renormalize && rest > 0.0) {
      const double scale = (1.0 - w[kClean]) / rest;
      for (NoiseType u : kNoiseOps) m[static_cast<size_t>(u)] *= scale;
      m[i] = 0.0;
    } else {
      m[kClean] += w[i];
      m[i] = 0.0;
    }
    // Rounding in the arithmetic above stays far inside kSumTolerance.
    add("− " + std::string(noise_name(t)),
        "minus-" + lowercase(noise_name(t)), AblationRole::kRemoval, t,
        NoiseMixture::from_weights(m));
  }
  return set;
}

NoiseMixture synthetic_sweep_mixture(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ContractViolation("noise probability must be in [0, 1]");
  }
  return NoiseMixture::from_weights({1.0 - p, p / 4, p / 4, p / 4, p / 4});
}

void SweepSpec::validate() const {
  if (probabilities.empty()) throw ContractViolation("empty probability list");
  for (size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ContractViolation("probability " + shortest(p) + " outside [0, 1]");
    }
    if (i > 0 && !(p > probabilities[i - 1])) {
      throw ContractViolation("probabilities must be strictly increasing");
    }
  }
}

std::string baseline_key(const ScoredCondition& condition) {
  return condition.dataset + "/" + condition.name;
}

std::string sweep_condition_name(const std::string& kind, double probability) {
  return kind + " p=" + shortest(probability);
}

// ---------------------------------------------------------------------------
// Runners

std::vector<ConditionRecord> run_sweep(const std::vector<std::string>& test,
                                       const std::vector<std::string>& references,
                                       const SweepSpec& spec,
                                       const ErrorLexicon& lexicon,
                                       const TranslatorBackend& backend,
                                       const RunOptions& options) {
  spec.validate();
  check_aligned(test, references);
  std::vector<ConditionRecord> templates;
  const std::string digest = lexicon.digest();
  for (double p : spec.probabilities) {
    ConditionRecord r;
    r.kind = "natural";
    r.scored.name = sweep_condition_name("natural", p);
    r.scored.dataset = spec.dataset;
    r.scored.noise_probability = p;
    r.seed = spec.seed;
    r.lexicon_digest = digest;
    r.backend = backend.identity_string();
    templates.push_back(std::move(r));
  }
  check_baselines(options, templates);
  probe(backend);

  const ConditionScorer empty;
  const ConditionScorer& scorer = options.baselines ? *options.baselines : empty;
  auto job = [&](ConditionRecord& r, const TranslateContext& base_ctx) {
    const NaturalNoiseConfig config{r.scored.noise_probability, spec.seed};
    const NaturalNoiseResult noised = noise_corpus_naturally(test, lexicon, config);
    r.total_tokens = noised.stats.total_tokens;
    r.eligible_tokens = noised.stats.eligible_tokens;
    r.noised_tokens = noised.stats.noised_tokens;
    r.scored.noised_fraction = noised.stats.noised_fraction();
    TranslateContext ctx = base_ctx;
    ctx.variables = {{"condition", r.scored.name},
                     {"probability", shortest(r.scored.noise_probability)}};
    const auto hyp = translate(noised.lines, backend, ctx);
    r.scored = scorer.score(hyp, references, r.scored,
                            options.baselines ? std::optional(baseline_key(r.scored))
                                              : std::nullopt,
                            options.bleu);
  };
  return run_conditions(std::move(templates), job, options.parallel);
}

std::vector<ConditionRecord> run_synthetic_sweep(
    const std::vector<std::string>& test,
    const std::vector<std::string>& references, const SweepSpec& spec,
    const Alphabet& alphabet, const TranslatorBackend& backend,
    const RunOptions& options) {
  spec.validate();
  check_aligned(test, references);
  std::vector<ConditionRecord> templates;
  for (double p : spec.probabilities) {
    ConditionRecord r;
    r.kind = "synthetic";
    r.scored.name = sweep_condition_name("synthetic", p);
    r.scored.dataset = spec.dataset;
    r.scored.noise_probability = p;
    r.seed = spec.seed;
    r.mixture = synthetic_sweep_mixture(p).to_string();
    r.backend = backend.identity_string();
    templates.push_back(std::move(r));
  }
  check_baselines(options, templates);
  probe(backend);

  const ConditionScorer empty;
  const ConditionScorer& scorer = options.baselines ? *options.baselines : empty;
  auto job = [&](ConditionRecord& r, const TranslateContext& base_ctx) {
    const NoisingPlan plan{r.scored.name,
                           synthetic_sweep_mixture(r.scored.noise_probability),
                           spec.seed, 0};
    SyntheticStats stats;
    const auto noised = noise_corpus(test, plan, alphabet, &stats);
    r.total_tokens = stats.total_tokens;
    r.eligible_tokens = stats.total_tokens;
    r.noised_tokens = stats.noised_tokens();
    r.scored.noised_fraction =
        stats.total_tokens ? static_cast<double>(r.noised_tokens) / stats.total_tokens
                           : 0.0;
    TranslateContext ctx = base_ctx;
    ctx.variables = {{"condition", r.scored.name},
                     {"probability", shortest(r.scored.noise_probability)},
                     {"mix", plan.mixture.to_string()}};
    const auto hyp = translate(noised, backend, ctx);
    r.scored = scorer.score(hyp, references, r.scored,
                            options.baselines ? std::optional(baseline_key(r.scored))
                                              : std::nullopt,
                            options.bleu);
  };
  return run_conditions(std::move(templates), job, options.parallel);
}

std::vector<ConditionRecord> run_ablation(
    const std::vector<std::string>& test,
    const std::vector<std::string>& references, const AblationPlanSet& plans,
    const TranslatorBackend& backend, const RunOptions& options) {
  check_aligned(test, references);
  probe(backend);
  std::vector<ConditionRecord> templates;
  for (const auto& p : plans.plans) {
    ConditionRecord r;
    r.kind = "ablation";
    r.scored.name = p.plan.name;
    r.scored.dataset = "ablation";
    r.seed = p.plan.base_seed;
    r.mixture = p.plan.mixture.to_string();
    r.role = std::string(role_name(p.role));
    r.backend = backend.identity_string();
    templates.push_back(std::move(r));
  }
  auto job = [&](ConditionRecord& r, const TranslateContext& base_ctx) {
    // Plan names are unique within a set.
    const AblationPlan& plan = *std::find_if(
        plans.plans.begin(), plans.plans.end(),
        [&](const AblationPlan& p) { return p.plan.name == r.scored.name; });
    TranslateContext ctx = base_ctx;
    ctx.variables = {{"plan", plan.plan.name},
                     {"slug", plan.slug},
                     {"mix", plan.plan.mixture.to_string()}};
    const auto hyp = translate(test, backend, ctx);
    r.scored.report = corpus_bleu(hyp, references, options.bleu);
    for (const auto& line : test) r.total_tokens += split_tokens(line).size();
  };
  auto records = run_conditions(std::move(templates), job, options.parallel);

  // Deltas need both baseline rows, so they are attached after all rows ran.
  ConditionScorer scorer;
  for (const auto& r : records) {
    if (!r.ok) continue;
    if (r.role == role_name(AblationRole::kNoNoise)) {
      scorer.register_baseline("no-noise", r.scored.report.bleu);
    } else if (r.role == role_name(AblationRole::kAllNoise)) {
      scorer.register_baseline("all-noise", r.scored.report.bleu);
    }
  }
  for (auto& r : records) {
    if (!r.ok) continue;
    std::optional<std::string> key;
    if (r.role == role_name(AblationRole::kAddition)) key = "no-noise";
    if (r.role == role_name(AblationRole::kRemoval)) key = "all-noise";
    if (!key) continue;
    if (!scorer.baseline(*key)) {
      r.error = "baseline row '" + *key + "' failed; delta unavailable";
      continue;
    }
    r.scored = scorer.score_report(r.scored.report, r.scored, key);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json optional_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

json record_to_json(const ConditionRecord& r) {
  const auto& s = r.scored;
  return json{
      {"kind", r.kind},
      {"name", s.name},
      {"dataset", s.dataset},
      {"noise_probability", s.noise_probability},
      {"noised_fraction", s.noised_fraction},
      {"bleu", s.report.bleu},
      {"precisions", s.report.precisions},
      {"bp", s.report.brevity_penalty},
      {"hyp_len", s.report.hypothesis_length},
      {"ref_len", s.report.reference_length},
      {"baseline_bleu", optional_json(s.baseline_bleu)},
      {"delta", optional_json(s.delta)},
      {"seed", r.seed},
      {"mixture", optional_json(r.mixture)},
      {"lexicon_digest", optional_json(r.lexicon_digest)},
      {"role", r.role},
      {"backend", r.backend},
      {"total_tokens", r.total_tokens},
      {"eligible_tokens", r.eligible_tokens},
      {"noised_tokens", r.noised_tokens},
      {"ok", r.ok},
      {"error", r.error},
  };
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

ConditionRecord record_from_json(const json& j) {
  ConditionRecord r;
  r.kind = j.value("kind", "");
  auto& s = r.scored;
  s.name = j.at("name").get<std::string>();
  s.dataset = j.value("dataset", "");
  s.noise_probability = j.value("noise_probability", 0.0);
  s.noised_fraction = j.value("noised_fraction", 0.0);
  s.report.bleu = j.at("bleu").get<double>();
  if (j.contains("precisions")) {
    s.report.precisions = j.at("precisions").get<std::array<double, kBleuOrder>>();
  }
  s.report.brevity_penalty = j.value("bp", 1.0);
  s.report.hypothesis_length = j.value("hyp_len", uint64_t{0});
  s.report.reference_length = j.value("ref_len", uint64_t{0});
  s.baseline_bleu = optional_from<double>(j, "baseline_bleu");
  s.delta = optional_from<double>(j, "delta");
  r.seed = j.value("seed", uint64_t{0});
  r.mixture = optional_from<std::string>(j, "mixture");
  r.lexicon_digest = optional_from<std::string>(j, "lexicon_digest");
  r.role = j.value("role", "");
  r.backend = j.value("backend", "");
  r.total_tokens = j.value("total_tokens", uint64_t{0});
  r.eligible_tokens = j.value("eligible_tokens", uint64_t{0});
  r.noised_tokens = j.value("noised_tokens", uint64_t{0});
  r.ok = j.value("ok", true);
  r.error = j.value("error", "");
  return r;
}

size_t display_width(std::string_view s) {
  size_t n = 0;
  size_t pos = 0;
  while (pos < s.size()) {
    if (!utf8::next_scalar(s, pos)) ++pos;
    ++n;
  }
  return n;
}

std::string pad_right(std::string_view s, size_t width) {
  std::string out(s);
  for (size_t w = display_width(s); w < width; ++w) out.push_back(' ');
  return out;
}

std::string pad_left(std::string_view s, size_t width) {
  std::string out;
  for (size_t w = display_width(s); w < width; ++w) out.push_back(' ');
  return out.append(s);
}

struct Column {
  std::string header;
  bool left_align = false;
  std::vector<std::string> cells;
};

std::string render_columns(const std::vector<Column>& columns,
                           const std::vector<size_t>& gaps_before) {
  std::vector<size_t> widths;
  for (const auto& c : columns) {
    size_t w = display_width(c.header);
    for (const auto& cell : c.cells) w = std::max(w, display_width(cell));
    widths.push_back(w);
  }
  auto row = [&](auto cell_of) {
    std::string line;
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) line += "  ";
      const std::string cell = cell_of(i);
      line += columns[i].left_align ? pad_right(cell, widths[i])
                                    : pad_left(cell, widths[i]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  std::string out = row([&](size_t i) { return columns[i].header; });
  const size_t rows = columns.empty() ? 0 : columns[0].cells.size();
  for (size_t r = 0; r < rows; ++r) {
    if (std::find(gaps_before.begin(), gaps_before.end(), r) != gaps_before.end()) {
      out += "\n";
    }
    out += row([&](size_t i) { return columns[i].cells[r]; });
  }
  return out;
}

std::string render_ablation(const std::vector<ConditionRecord>& records) {
  Column label{"Training Noise", true, {}};
  Column bleu{"BLEU", false, {}};
  Column delta{"Δ", false, {}};
  std::vector<size_t> gaps;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i > 0 && r.role == "all-noise") gaps.push_back(i);
    label.cells.push_back(r.scored.name);
    bleu.cells.push_back(r.ok ? fixed2(r.scored.report.bleu) : "failed");
    delta.cells.push_back(r.scored.delta ? fixed2(*r.scored.delta) : "");
  }
  return render_columns({label, bleu, delta}, gaps);
}

std::string render_sweep(const std::vector<ConditionRecord>& records) {
  const bool with_baseline =
      std::any_of(records.begin(), records.end(),
                  [](const auto& r) { return r.scored.baseline_bleu.has_value(); });
  Column dataset{"Dataset", true, {}};
  Column prob{"Noise Probability", false, {}};
  Column noised{"Noised Tokens", false, {}};
  Column base{"Baseline BLEU", false, {}};
  Column bleu{"BLEU", false, {}};
  Column delta{"Δ", false, {}};
  std::vector<size_t> gaps;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto& s = r.scored;
    if (i > 0 && s.dataset != records[i - 1].scored.dataset) gaps.push_back(i);
    dataset.cells.push_back(s.dataset);
    prob.cells.push_back(percent2(s.noise_probability));
    noised.cells.push_back(r.ok ? percent2(s.noised_fraction) : "");
    base.cells.push_back(s.baseline_bleu ? fixed2(*s.baseline_bleu) : "");
    bleu.cells.push_back(r.ok ? fixed2(s.report.bleu) : "failed");
    delta.cells.push_back(s.delta ? fixed2(*s.delta) : "");
  }
  std::vector<Column> cols{dataset, prob, noised};
  if (with_baseline) cols.push_back(base);
  cols.push_back(bleu);
  if (with_baseline) cols.push_back(delta);
  return render_columns(cols, gaps);
}

}  // namespace

std::string report_to_json(const std::vector<ConditionRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return arr.dump(2);
}

std::vector<ConditionRecord> report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("report must be a JSON array");
  std::vector<ConditionRecord> out;
  try {
    for (const auto& item : j) out.push_back(record_from_json(item));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed condition record: ") + e.what());
  }
  return out;
}

ConditionScorer baselines_from_report(const std::vector<ConditionRecord>& records) {
  ConditionScorer scorer;
  for (const auto& r : records) {
    if (r.ok) scorer.register_baseline(baseline_key(r.scored), r.scored.report.bleu);
  }
  return scorer;
}

std::vector<ConditionRecord> attach_baselines(std::vector<ConditionRecord> records,
                                              const ConditionScorer& baselines) {
  for (auto& r : records) {
    if (!r.ok) continue;
    r.scored.baseline_bleu.reset();
    r.scored.delta.reset();
    const std::string key = baseline_key(r.scored);
    if (baselines.baseline(key)) {
      r.scored = baselines.score_report(r.scored.report, r.scored, key);
    }
  }
  return records;
}

std::string render_table(const std::vector<ConditionRecord>& records) {
  const bool ablation =
      !records.empty() &&
      std::all_of(records.begin(), records.end(),
                  [](const auto& r) { return r.kind == "ablation"; });
  return ablation ? render_ablation(records) : render_sweep(records);
}

}  // namespace nmtnoise
