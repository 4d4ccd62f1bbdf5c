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

// nmtnoise command-line front end. Talks to the library only through the C
// interface in nmtnoise.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmtnoise.h"

namespace {

struct Failure {
  nmt_status status;
  std::string message;
};

void check(nmt_status status) {
  if (status != NMT_OK) throw Failure{status, nmt_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { nmt_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using Mixture = std::unique_ptr<nmt_mixture, HandleDeleter<nmt_mixture, nmt_mixture_free>>;
using AlphabetHandle =
    std::unique_ptr<nmt_alphabet, HandleDeleter<nmt_alphabet, nmt_alphabet_free>>;
using Lexicon = std::unique_ptr<nmt_lexicon, HandleDeleter<nmt_lexicon, nmt_lexicon_free>>;
using Backend = std::unique_ptr<nmt_backend, HandleDeleter<nmt_backend, nmt_backend_free>>;

Mixture make_mixture(const std::string& spec) {
  nmt_mixture* m = nullptr;
  check(nmt_mixture_parse(spec.c_str(), &m));
  return Mixture(m);
}

// "auto" -> derived from the input corpus (NULL handle).
AlphabetHandle make_alphabet(const std::string& spec) {
  if (spec == "auto") return nullptr;
  nmt_alphabet* a = nullptr;
  check(nmt_alphabet_from_file(spec.c_str(), &a));
  return AlphabetHandle(a);
}

Backend make_backend(const std::string& spec, uint64_t timeout_ms) {
  nmt_backend* b = nullptr;
  check(nmt_backend_create(spec.c_str(), &b));
  Backend owned(b);
  if (timeout_ms) check(nmt_backend_set_timeout_ms(b, timeout_ms));
  return owned;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{NMT_ERR_IO, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
      std::remove(temp.c_str());
      throw Failure{NMT_ERR_IO, "cannot write " + path};
    }
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0) {
    std::remove(temp.c_str());
    throw Failure{NMT_ERR_IO, "cannot write " + path};
  }
}

std::vector<double> parse_probs(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{NMT_ERR_PARSE, "bad probability '" + item + "'"};
    }
  }
  return out;
}

// Writes the JSON report to --out (if given) and prints it, or its table
// rendering, to stdout.
void emit_report(const char* json, const std::string& out_path,
                 const std::string& format) {
  if (!out_path.empty()) spit(out_path, std::string(json) + "\n");
  if (format == "table") {
    char* table = nullptr;
    check(nmt_report_render_table(json, &table));
    OwnedString owned(table);
    std::cout << table;
  } else if (out_path.empty()) {
    std::cout << json << "\n";
  }
}

struct NoiseArgs {
  std::string mix = "clean=0.6,del=0.1,ins=0.1,sub=0.1,swap=0.1";
  uint64_t seed = 0;
  uint64_t epoch = 0;
  std::string alphabet = "auto";
  std::string in;
  std::string out;
  unsigned threads = 1;
};

void add_noise_options(CLI::App* cmd, NoiseArgs& a) {
  cmd->add_option("--mix", a.mix, "Noise mixture")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Base seed")->capture_default_str();
  cmd->add_option("--epoch", a.epoch, "Epoch (first epoch for 'epochs')")
      ->capture_default_str();
  cmd->add_option("--alphabet", a.alphabet,
                  "'auto' or a file whose characters form the alphabet")
      ->capture_default_str();
  cmd->add_option("--in", a.in, "Input corpus")->required();
  cmd->add_option("--out", a.out, "Output corpus")->required();
  cmd->add_option("--threads", a.threads, "Worker threads")->capture_default_str();
}

struct RunArgs {
  std::string test;
  std::string ref;
  std::string backend = "copy";
  uint64_t seed = 0;
  uint64_t timeout_ms = 0;
  std::string out;
  std::string format = "json";
  std::string dataset = "test";
  std::string baseline;
  bool parallel = false;
  bool smooth = false;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--test", a.test, "Clean test source, one sentence per line")
      ->required();
  cmd->add_option("--ref", a.ref, "References, line-aligned with --test")
      ->required();
  cmd->add_option("--backend", a.backend,
                  "'identity', 'copy', or a shell command filtering lines")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Seed")->capture_default_str();
  cmd->add_option("--timeout-ms", a.timeout_ms, "Backend timeout per condition");
  cmd->add_option("--out", a.out, "Write the JSON report here");
  cmd->add_option("--format", a.format, "Stdout format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd->add_option("--dataset", a.dataset, "Dataset label")->capture_default_str();
  cmd->add_option("--baseline", a.baseline,
                  "Report of a baseline system; enables deltas");
  cmd->add_flag("--parallel", a.parallel, "Run conditions concurrently");
  cmd->add_flag("--smooth", a.smooth, "Add-one smoothing for n >= 2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character-noise corpora and robustness evaluation for MT"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nmt_version()));

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Apply synthetic noise to a corpus");
  add_noise_options(noise_cmd, noise);

  NoiseArgs epochs;
  uint64_t epoch_count = 1;
  auto* epochs_cmd =
      app.add_subcommand("epochs", "Write <out>.epoch<k> for consecutive epochs");
  add_noise_options(epochs_cmd, epochs);
  epochs_cmd->add_option("--count", epoch_count, "Number of epochs")->required();

  std::string inj_lexicon, inj_in, inj_out;
  double inj_prob = 1.0;
  uint64_t inj_seed = 0;
  auto* inject_cmd =
      app.add_subcommand("inject", "Inject natural noise from an error lexicon");
  inject_cmd->add_option("--lexicon", inj_lexicon, "TSV lexicon")->required();
  inject_cmd->add_option("--prob", inj_prob, "Per-token probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  inject_cmd->add_option("--seed", inj_seed, "Seed")->capture_default_str();
  inject_cmd->add_option("--in", inj_in, "Input corpus")->required();
  inject_cmd->add_option("--out", inj_out, "Output corpus")->required();

  std::string hyp, ref;
  bool smooth = false;
  auto* bleu_cmd = app.add_subcommand("bleu", "Corpus BLEU-4");
  bleu_cmd->add_option("--hyp", hyp, "Hypotheses")->required();
  bleu_cmd->add_option("--ref", ref, "References")->required();
  bleu_cmd->add_flag("--smooth", smooth, "Add-one smoothing for n >= 2");

  RunArgs sweep;
  std::string sweep_lexicon, probs = "0,0.0625,0.25,1.0";
  bool synthetic = false;
  std::string sweep_alphabet = "auto";
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Score a backend across noise probabilities");
  add_run_options(sweep_cmd, sweep);
  auto* lex_opt = sweep_cmd->add_option("--lexicon", sweep_lexicon,
                                        "TSV lexicon for natural noise");
  auto* syn_opt = sweep_cmd->add_flag("--synthetic", synthetic,
                                      "Synthetic noise: clean 1-p, p/4 per type");
  lex_opt->excludes(syn_opt);
  sweep_cmd->add_option("--probs", probs, "Comma-separated probabilities")
      ->capture_default_str();
  sweep_cmd->add_option("--alphabet", sweep_alphabet, "Alphabet for --synthetic")
      ->capture_default_str();

  RunArgs ablate;
  std::string mix_default = "clean=0.6,del=0.1,ins=0.1,sub=0.1,swap=0.1";
  bool renormalize = false;
  auto* ablate_cmd =
      app.add_subcommand("ablate", "Score one translation per ablation plan");
  add_run_options(ablate_cmd, ablate);
  ablate_cmd->add_option("--mix-default", mix_default, "Full noise mixture")
      ->capture_default_str();
  ablate_cmd->add_flag("--renormalize", renormalize,
                       "Removals keep the clean weight of the full mixture");

  std::string plans_mix = mix_default;
  uint64_t plans_seed = 0;
  bool plans_renorm = false;
  auto* plans_cmd = app.add_subcommand("plans", "Print the ten ablation plans");
  plans_cmd->add_option("--mix-default", plans_mix, "Full noise mixture")
      ->capture_default_str();
  plans_cmd->add_option("--seed", plans_seed, "Seed")->capture_default_str();
  plans_cmd->add_flag("--renormalize", plans_renorm,
                      "Removals keep the clean weight of the full mixture");

  std::string report_in, report_baseline, report_out, report_format = "table";
  auto* report_cmd =
      app.add_subcommand("report", "Attach baselines to a report and render it");
  report_cmd->add_option("--in", report_in, "Report JSON")->required();
  report_cmd->add_option("--baseline", report_baseline, "Baseline report JSON");
  report_cmd->add_option("--out", report_out, "Write the JSON report here");
  report_cmd->add_option("--format", report_format, "Stdout format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*noise_cmd) {
      auto mixture = make_mixture(noise.mix);
      auto alphabet = make_alphabet(noise.alphabet);
      char* stats = nullptr;
      check(nmt_noise_file(noise.in.c_str(), noise.out.c_str(), mixture.get(),
                           alphabet.get(), noise.seed, noise.epoch,
                           noise.threads, &stats));
      OwnedString owned(stats);
      std::cout << stats << "\n";
    } else if (*epochs_cmd) {
      auto mixture = make_mixture(epochs.mix);
      auto alphabet = make_alphabet(epochs.alphabet);
      char* paths = nullptr;
      check(nmt_epoch_files(epochs.in.c_str(), epochs.out.c_str(), mixture.get(),
                            alphabet.get(), epochs.seed, epochs.epoch,
                            epoch_count, epochs.threads, &paths));
      OwnedString owned(paths);
      std::cout << paths << "\n";
    } else if (*inject_cmd) {
      nmt_lexicon* lex = nullptr;
      check(nmt_lexicon_load(inj_lexicon.c_str(), &lex));
      Lexicon owned_lex(lex);
      char* stats = nullptr;
      check(nmt_inject_file(inj_in.c_str(), inj_out.c_str(), lex, inj_prob,
                            inj_seed, &stats));
      OwnedString owned(stats);
      std::cout << stats << "\n";
    } else if (*bleu_cmd) {
      char* report = nullptr;
      check(nmt_bleu_files(hyp.c_str(), ref.c_str(), smooth ? 1 : 0, &report));
      OwnedString owned(report);
      std::cout << report << "\n";
    } else if (*sweep_cmd) {
      if (sweep_lexicon.empty() && !synthetic) {
        throw Failure{NMT_ERR_INVALID_ARGUMENT,
                      "sweep needs --lexicon or --synthetic"};
      }
      const auto p = parse_probs(probs);
      const std::string baseline =
          sweep.baseline.empty() ? std::string() : slurp(sweep.baseline);
      nmt_run_options options;
      nmt_run_options_init(&options);
      options.probabilities = p.data();
      options.n_probabilities = p.size();
      options.seed = sweep.seed;
      options.dataset = sweep.dataset.c_str();
      options.baseline_report = sweep.baseline.empty() ? nullptr : baseline.c_str();
      options.parallel = sweep.parallel;
      options.smooth = sweep.smooth;
      auto backend = make_backend(sweep.backend, sweep.timeout_ms);
      char* report = nullptr;
      if (synthetic) {
        auto alphabet = make_alphabet(sweep_alphabet);
        check(nmt_sweep_synthetic(sweep.test.c_str(), sweep.ref.c_str(),
                                  alphabet.get(), backend.get(), &options,
                                  &report));
      } else {
        nmt_lexicon* lex = nullptr;
        check(nmt_lexicon_load(sweep_lexicon.c_str(), &lex));
        Lexicon owned_lex(lex);
        check(nmt_sweep_natural(sweep.test.c_str(), sweep.ref.c_str(), lex,
                                backend.get(), &options, &report));
      }
      OwnedString owned(report);
      emit_report(report, sweep.out, sweep.format);
    } else if (*ablate_cmd) {
      auto mixture = make_mixture(mix_default);
      nmt_run_options options;
      nmt_run_options_init(&options);
      options.seed = ablate.seed;
      options.parallel = ablate.parallel;
      options.smooth = ablate.smooth;
      auto backend = make_backend(ablate.backend, ablate.timeout_ms);
      char* report = nullptr;
      check(nmt_ablate(ablate.test.c_str(), ablate.ref.c_str(), mixture.get(),
                       renormalize, backend.get(), &options, &report));
      OwnedString owned(report);
      emit_report(report, ablate.out, ablate.format);
    } else if (*plans_cmd) {
      auto mixture = make_mixture(plans_mix);
      char* plans = nullptr;
      check(nmt_ablation_plans(mixture.get(), plans_seed, plans_renorm, &plans));
      OwnedString owned(plans);
      std::cout << plans << "\n";
    } else if (*report_cmd) {
      std::string report = slurp(report_in);
      if (!report_baseline.empty()) {
        const std::string base = slurp(report_baseline);
        char* merged = nullptr;
        check(nmt_report_attach_baselines(report.c_str(), base.c_str(), &merged));
        OwnedString owned(merged);
        report = merged;
      }
      emit_report(report.c_str(), report_out, report_format);
    }
  } catch (const Failure& f) {
    std::cerr << "nmtnoise: " << nmt_status_string(f.status) << ": "
              << f.message << "\n";
    return 1;
  }
  return 0;
}
