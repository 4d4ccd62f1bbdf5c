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

#include "nmtnoise.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "core/backend.hpp"
#include "core/bleu.hpp"
#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/natural_noise.hpp"
#include "core/noise.hpp"
#include "core/utf8.hpp"
#include "json.hpp"

struct nmt_mixture {
  nmtnoise::NoiseMixture value;
};
struct nmt_alphabet {
  nmtnoise::Alphabet value;
};
struct nmt_lexicon {
  nmtnoise::ErrorLexicon value;
};
struct nmt_backend {
  nmtnoise::TranslatorBackend value;
};

namespace {

thread_local std::string g_last_error;

class NullArgument : public nmtnoise::ContractViolation {
 public:
  explicit NullArgument(const char* name)
      : ContractViolation(std::string("argument '") + name + "' is NULL") {}
};

template <typename T>
const T& need(const T* p, const char* name) {
  if (p == nullptr) throw NullArgument(name);
  return *p;
}

const char* need_str(const char* p, const char* name) {
  if (p == nullptr) throw NullArgument(name);
  return p;
}

template <typename T>
void need_out(T* p, const char* name) {
  if (p == nullptr) throw NullArgument(name);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put_string(char** out, const std::string& s) {
  if (out != nullptr) *out = dup_string(s);
}

template <typename F>
nmt_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return NMT_OK;
  } catch (const nmtnoise::ContractViolation& e) {
    g_last_error = e.what();
    return NMT_ERR_INVALID_ARGUMENT;
  } catch (const nmtnoise::ParseError& e) {
    g_last_error = e.what();
    return NMT_ERR_PARSE;
  } catch (const nmtnoise::IoError& e) {
    g_last_error = e.what();
    return NMT_ERR_IO;
  } catch (const nmtnoise::BackendError& e) {
    g_last_error = e.what();
    return NMT_ERR_BACKEND;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NMT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NMT_ERR_INTERNAL;
  }
}

std::optional<nmtnoise::Alphabet> maybe_alphabet(const nmt_alphabet* a) {
  if (a == nullptr) return std::nullopt;
  return a->value;
}

nmtnoise::RunOptions run_options(const nmt_run_options* options,
                                 nmtnoise::SweepSpec* spec) {
  nmt_run_options defaults;
  nmt_run_options_init(&defaults);
  const nmt_run_options& o = options ? *options : defaults;
  nmtnoise::RunOptions ro;
  ro.parallel = o.parallel != 0;
  ro.bleu.smooth = o.smooth != 0;
  if (o.baseline_report != nullptr) {
    ro.baselines = nmtnoise::baselines_from_report(
        nmtnoise::report_from_json(o.baseline_report));
  }
  if (spec != nullptr) {
    if (o.probabilities != nullptr) {
      spec->probabilities.assign(o.probabilities,
                                 o.probabilities + o.n_probabilities);
    }
    spec->seed = o.seed;
    if (o.dataset != nullptr) spec->dataset = o.dataset;
  }
  return ro;
}

}  // namespace

extern "C" {

const char* nmt_version(void) { return "1.0.0"; }

const char* nmt_last_error(void) { return g_last_error.c_str(); }

const char* nmt_status_string(nmt_status status) {
  switch (status) {
    case NMT_OK: return "ok";
    case NMT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NMT_ERR_PARSE: return "parse error";
    case NMT_ERR_IO: return "I/O error";
    case NMT_ERR_BACKEND: return "backend failure";
    case NMT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void nmt_string_free(char* s) { std::free(s); }

// ---- Mixtures

nmt_status nmt_mixture_parse(const char* spec, nmt_mixture** out) {
  return guard([&] {
    need_out(out, "out");
    *out = new nmt_mixture{nmtnoise::NoiseMixture::parse(need_str(spec, "spec"))};
  });
}

nmt_status nmt_mixture_default(nmt_mixture** out) {
  return guard([&] {
    need_out(out, "out");
    *out = new nmt_mixture{nmtnoise::NoiseMixture()};
  });
}

nmt_status nmt_mixture_to_string(const nmt_mixture* mixture, char** out) {
  return guard([&] {
    need_out(out, "out");
    put_string(out, need(mixture, "mixture").value.to_string());
  });
}

void nmt_mixture_free(nmt_mixture* mixture) { delete mixture; }

// ---- Alphabets

nmt_status nmt_alphabet_from_text(const char* text, nmt_alphabet** out) {
  return guard([&] {
    need_out(out, "out");
    *out = new nmt_alphabet{nmtnoise::Alphabet::from_text(
        nmtnoise::utf8::decode(need_str(text, "text")))};
  });
}

nmt_status nmt_alphabet_from_file(const char* path, nmt_alphabet** out) {
  return guard([&] {
    need_out(out, "out");
    *out = new nmt_alphabet{nmtnoise::file_alphabet(need_str(path, "path"))};
  });
}

size_t nmt_alphabet_size(const nmt_alphabet* alphabet) {
  return alphabet ? alphabet->value.size() : 0;
}

void nmt_alphabet_free(nmt_alphabet* alphabet) { delete alphabet; }

// ---- Synthetic noise

nmt_status nmt_noise_token(const char* token, const nmt_mixture* mixture,
                           const nmt_alphabet* alphabet, uint64_t seed,
                           uint64_t epoch, uint64_t line_index,
                           uint64_t token_index, char** out,
                           nmt_noise_type* applied) {
  return guard([&] {
    need_out(out, "out");
    auto rng = nmtnoise::derive_seed(seed, epoch, line_index, token_index);
    const auto outcome = nmtnoise::noise_token_detailed(
        nmtnoise::Token::from_utf8(need_str(token, "token")),
        need(mixture, "mixture").value, need(alphabet, "alphabet").value, rng);
    put_string(out, outcome.token.to_utf8());
    if (applied) *applied = static_cast<nmt_noise_type>(outcome.applied);
  });
}

nmt_status nmt_noise_file(const char* in_path, const char* out_path,
                          const nmt_mixture* mixture,
                          const nmt_alphabet* alphabet, uint64_t seed,
                          uint64_t epoch, unsigned threads, char** stats_json) {
  return guard([&] {
    const nmtnoise::NoisingPlan plan{"noise", need(mixture, "mixture").value,
                                     seed, epoch};
    const auto stats = nmtnoise::noise_file(need_str(in_path, "in_path"),
                                            need_str(out_path, "out_path"), plan,
                                            maybe_alphabet(alphabet), threads);
    put_string(stats_json, stats.to_json());
  });
}

nmt_status nmt_epoch_files(const char* in_path, const char* out_path,
                           const nmt_mixture* mixture,
                           const nmt_alphabet* alphabet, uint64_t seed,
                           uint64_t first_epoch, uint64_t count,
                           unsigned threads, char** paths_json) {
  return guard([&] {
    const nmtnoise::NoisingPlan plan{"epochs", need(mixture, "mixture").value,
                                     seed, first_epoch};
    const auto paths = nmtnoise::epoch_files(
        need_str(in_path, "in_path"), need_str(out_path, "out_path"), plan,
        count, maybe_alphabet(alphabet), threads);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : paths) arr.push_back(p.string());
    put_string(paths_json, arr.dump());
  });
}

// ---- Natural noise

nmt_status nmt_lexicon_load(const char* path, nmt_lexicon** out) {
  return guard([&] {
    need_out(out, "out");
    *out = new nmt_lexicon{nmtnoise::load_lexicon(
        std::filesystem::path(need_str(path, "path")))};
  });
}

size_t nmt_lexicon_size(const nmt_lexicon* lexicon) {
  return lexicon ? lexicon->value.size() : 0;
}

nmt_status nmt_lexicon_digest(const nmt_lexicon* lexicon, char** out) {
  return guard([&] {
    need_out(out, "out");
    put_string(out, need(lexicon, "lexicon").value.digest());
  });
}

void nmt_lexicon_free(nmt_lexicon* lexicon) { delete lexicon; }

nmt_status nmt_inject_file(const char* in_path, const char* out_path,
                           const nmt_lexicon* lexicon, double probability,
                           uint64_t seed, char** stats_json) {
  return guard([&] {
    const nmtnoise::NaturalNoiseConfig config{probability, seed};
    config.validate();
    const auto stats = nmtnoise::noise_file_naturally(
        need_str(in_path, "in_path"), need_str(out_path, "out_path"),
        need(lexicon, "lexicon").value, config);
    put_string(stats_json, stats.to_json());
  });
}

// ---- BLEU

nmt_status nmt_bleu_files(const char* hyp_path, const char* ref_path,
                          int smooth, char** report_json) {
  return guard([&] {
    need_out(report_json, "report_json");
    const auto hyp = nmtnoise::read_lines(need_str(hyp_path, "hyp_path"));
    const auto ref = nmtnoise::read_lines(need_str(ref_path, "ref_path"));
    put_string(report_json,
               nmtnoise::corpus_bleu(hyp, ref, {smooth != 0}).to_json());
  });
}

nmt_status nmt_bleu_lines(const char* const* hypotheses, size_t n_hypotheses,
                          const char* const* references, size_t n_references,
                          int smooth, char** report_json) {
  return guard([&] {
    need_out(report_json, "report_json");
    if (n_hypotheses && !hypotheses) throw NullArgument("hypotheses");
    if (n_references && !references) throw NullArgument("references");
    std::vector<std::string> hyp, ref;
    for (size_t i = 0; i < n_hypotheses; ++i) {
      hyp.emplace_back(need_str(hypotheses[i], "hypotheses[i]"));
    }
    for (size_t i = 0; i < n_references; ++i) {
      ref.emplace_back(need_str(references[i], "references[i]"));
    }
    put_string(report_json,
               nmtnoise::corpus_bleu(hyp, ref, {smooth != 0}).to_json());
  });
}

// ---- Backends

nmt_status nmt_backend_create(const char* spec, nmt_backend** out) {
  return guard([&] {
    need_out(out, "out");
    *out = new nmt_backend{
        nmtnoise::TranslatorBackend::parse(need_str(spec, "spec"))};
  });
}

nmt_status nmt_backend_set_timeout_ms(nmt_backend* backend,
                                      uint64_t timeout_ms) {
  return guard([&] {
    if (backend == nullptr) throw NullArgument("backend");
    if (timeout_ms == 0) {
      throw nmtnoise::ContractViolation("timeout must be positive");
    }
    backend->value.timeout = std::chrono::milliseconds(timeout_ms);
  });
}

void nmt_backend_free(nmt_backend* backend) { delete backend; }

nmt_status nmt_translate_text(const nmt_backend* backend, const char* text,
                              char** out) {
  return guard([&] {
    need_out(out, "out");
    std::vector<std::string> lines;
    std::istringstream in(need_str(text, "text"));
    std::string line;
    while (nmtnoise::read_line(in, line)) lines.push_back(line);
    std::string joined;
    for (const auto& l : nmtnoise::translate(lines, need(backend, "backend").value)) {
      joined += l;
      joined += '\n';
    }
    put_string(out, joined);
  });
}

// ---- Experiments

void nmt_run_options_init(nmt_run_options* options) {
  if (options == nullptr) return;
  *options = nmt_run_options{};
  options->dataset = nullptr;
}

nmt_status nmt_sweep_natural(const char* test_path, const char* ref_path,
                             const nmt_lexicon* lexicon,
                             const nmt_backend* backend,
                             const nmt_run_options* options,
                             char** report_json) {
  return guard([&] {
    need_out(report_json, "report_json");
    nmtnoise::SweepSpec spec;
    const auto ro = run_options(options, &spec);
    const auto test = nmtnoise::read_lines(need_str(test_path, "test_path"));
    const auto ref = nmtnoise::read_lines(need_str(ref_path, "ref_path"));
    const auto records =
        nmtnoise::run_sweep(test, ref, spec, need(lexicon, "lexicon").value,
                            need(backend, "backend").value, ro);
    put_string(report_json, nmtnoise::report_to_json(records));
  });
}

nmt_status nmt_sweep_synthetic(const char* test_path, const char* ref_path,
                               const nmt_alphabet* alphabet,
                               const nmt_backend* backend,
                               const nmt_run_options* options,
                               char** report_json) {
  return guard([&] {
    need_out(report_json, "report_json");
    nmtnoise::SweepSpec spec;
    const auto ro = run_options(options, &spec);
    const auto test = nmtnoise::read_lines(need_str(test_path, "test_path"));
    const auto ref = nmtnoise::read_lines(need_str(ref_path, "ref_path"));
    const nmtnoise::Alphabet used =
        alphabet ? alphabet->value : nmtnoise::corpus_alphabet(test);
    const auto records = nmtnoise::run_synthetic_sweep(
        test, ref, spec, used, need(backend, "backend").value, ro);
    put_string(report_json, nmtnoise::report_to_json(records));
  });
}

nmt_status nmt_ablation_plans(const nmt_mixture* default_mixture,
                              uint64_t seed, int renormalize,
                              char** plans_json) {
  return guard([&] {
    need_out(plans_json, "plans_json");
    const auto set = nmtnoise::build_ablation_plans(
        default_mixture ? default_mixture->value : nmtnoise::NoiseMixture(),
        seed, renormalize != 0);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : set.plans) {
      arr.push_back({{"name", p.plan.name},
                     {"slug", p.slug},
                     {"mixture", p.plan.mixture.to_string()},
                     {"seed", p.plan.base_seed}});
    }
    put_string(plans_json, arr.dump(2));
  });
}

nmt_status nmt_ablate(const char* test_path, const char* ref_path,
                      const nmt_mixture* default_mixture, int renormalize,
                      const nmt_backend* backend,
                      const nmt_run_options* options, char** report_json) {
  return guard([&] {
    need_out(report_json, "report_json");
    const auto ro = run_options(options, nullptr);
    const uint64_t seed = options ? options->seed : 0;
    const auto test = nmtnoise::read_lines(need_str(test_path, "test_path"));
    const auto ref = nmtnoise::read_lines(need_str(ref_path, "ref_path"));
    const auto plans = nmtnoise::build_ablation_plans(
        default_mixture ? default_mixture->value : nmtnoise::NoiseMixture(),
        seed, renormalize != 0);
    const auto records = nmtnoise::run_ablation(
        test, ref, plans, need(backend, "backend").value, ro);
    put_string(report_json, nmtnoise::report_to_json(records));
  });
}

nmt_status nmt_report_attach_baselines(const char* report_json,
                                       const char* baseline_json,
                                       char** out_json) {
  return guard([&] {
    need_out(out_json, "out_json");
    auto records = nmtnoise::report_from_json(need_str(report_json, "report_json"));
    const auto baselines = nmtnoise::baselines_from_report(
        nmtnoise::report_from_json(need_str(baseline_json, "baseline_json")));
    put_string(out_json, nmtnoise::report_to_json(
                             nmtnoise::attach_baselines(std::move(records), baselines)));
  });
}

nmt_status nmt_report_render_table(const char* report_json, char** table) {
  return guard([&] {
    need_out(table, "table");
    put_string(table, nmtnoise::render_table(
                          nmtnoise::report_from_json(need_str(report_json, "report_json"))));
  });
}

}  // extern "C"
