/*
 * Copyright 2026 The nmtnoise Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libnmtnoise: synthetic and natural character noise for
 * translation corpora, corpus BLEU, and the sweep/ablation runners.
 *
 * Conventions:
 *  - Every fallible call returns an nmt_status. On failure the message is
 *    available from nmt_last_error() on the same thread until the next call.
 *  - Handles are opaque; each *_create / *_load / *_parse has a *_free.
 *    Free functions accept NULL.
 *  - char** out-parameters receive heap strings owned by the caller and
 *    released with nmt_string_free().
 *  - All text is UTF-8. Paths are plain byte strings.
 */

#ifndef NMTNOISE_H_
#define NMTNOISE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NMT_API __declspec(dllexport)
#else
#define NMT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nmt_status {
  NMT_OK = 0,
  NMT_ERR_INVALID_ARGUMENT = 1, /* contract violation, NULL argument */
  NMT_ERR_PARSE = 2,            /* malformed mixture, lexicon, UTF-8, JSON */
  NMT_ERR_IO = 3,
  NMT_ERR_BACKEND = 4,          /* translator exit status, timeout, lines */
  NMT_ERR_INTERNAL = 5
} nmt_status;

typedef enum nmt_noise_type {
  NMT_NOISE_CLEAN = 0,
  NMT_NOISE_DELETION = 1,
  NMT_NOISE_INSERTION = 2,
  NMT_NOISE_SUBSTITUTION = 3,
  NMT_NOISE_SWAP = 4
} nmt_noise_type;

typedef struct nmt_mixture nmt_mixture;
typedef struct nmt_alphabet nmt_alphabet;
typedef struct nmt_lexicon nmt_lexicon;
typedef struct nmt_backend nmt_backend;

NMT_API const char* nmt_version(void);
NMT_API const char* nmt_last_error(void);
NMT_API const char* nmt_status_string(nmt_status status);
NMT_API void nmt_string_free(char* s);

/* ---- Mixtures ---------------------------------------------------------- */

/* "clean=0.6,del=0.1,ins=0.1,sub=0.1,swap=0.1"; omitted keys are 0. */
NMT_API nmt_status nmt_mixture_parse(const char* spec, nmt_mixture** out);
/* 60% clean, 10% per noise type. */
NMT_API nmt_status nmt_mixture_default(nmt_mixture** out);
NMT_API nmt_status nmt_mixture_to_string(const nmt_mixture* mixture, char** out);
NMT_API void nmt_mixture_free(nmt_mixture* mixture);

/* ---- Alphabets --------------------------------------------------------- */

/* Distinct non-whitespace characters of the text / of the file contents. */
NMT_API nmt_status nmt_alphabet_from_text(const char* text, nmt_alphabet** out);
NMT_API nmt_status nmt_alphabet_from_file(const char* path, nmt_alphabet** out);
NMT_API size_t nmt_alphabet_size(const nmt_alphabet* alphabet);
NMT_API void nmt_alphabet_free(nmt_alphabet* alphabet);

/* ---- Synthetic noise --------------------------------------------------- */

/*
 * Noises one token with the stream derived from
 * (seed, epoch, line_index, token_index), exactly as corpus noising would at
 * that position. `applied` (nullable) receives the operation that changed
 * the token, NMT_NOISE_CLEAN if none did.
 */
NMT_API nmt_status nmt_noise_token(const char* token,
                                   const nmt_mixture* mixture,
                                   const nmt_alphabet* alphabet, uint64_t seed,
                                   uint64_t epoch, uint64_t line_index,
                                   uint64_t token_index, char** out,
                                   nmt_noise_type* applied);

/*
 * Noises a corpus file. `alphabet` NULL selects the alphabet of the input.
 * `threads` 0 or 1 runs sequentially. `stats_json` (nullable) receives
 * {"total_tokens":N,"noised_tokens":N,"applied":{"clean":N,...}}.
 * The output file appears only if the whole run succeeds.
 */
NMT_API nmt_status nmt_noise_file(const char* in_path, const char* out_path,
                                  const nmt_mixture* mixture,
                                  const nmt_alphabet* alphabet, uint64_t seed,
                                  uint64_t epoch, unsigned threads,
                                  char** stats_json);

/*
 * Writes <out_path>.epoch<e> for e in [first_epoch, first_epoch + count).
 * `paths_json` (nullable) receives a JSON array of the written paths.
 */
NMT_API nmt_status nmt_epoch_files(const char* in_path, const char* out_path,
                                   const nmt_mixture* mixture,
                                   const nmt_alphabet* alphabet, uint64_t seed,
                                   uint64_t first_epoch, uint64_t count,
                                   unsigned threads, char** paths_json);

/* ---- Natural noise ----------------------------------------------------- */

/* TSV lexicon: clean<TAB>error<TAB>error...; '#' lines are comments. */
NMT_API nmt_status nmt_lexicon_load(const char* path, nmt_lexicon** out);
NMT_API size_t nmt_lexicon_size(const nmt_lexicon* lexicon);
NMT_API nmt_status nmt_lexicon_digest(const nmt_lexicon* lexicon, char** out);
NMT_API void nmt_lexicon_free(nmt_lexicon* lexicon);

/*
 * Injects lexicon errors with per-token `probability`. `stats_json`
 * (nullable) receives
 * {"total_tokens":N,"eligible_tokens":N,"noised_tokens":N}.
 */
NMT_API nmt_status nmt_inject_file(const char* in_path, const char* out_path,
                                   const nmt_lexicon* lexicon,
                                   double probability, uint64_t seed,
                                   char** stats_json);

/* ---- BLEU -------------------------------------------------------------- */

/*
 * Corpus BLEU-4 of a hypothesis file against a reference file.
 * {"bleu":..,"precisions":[..],"bp":..,"hyp_len":..,"ref_len":..}
 */
NMT_API nmt_status nmt_bleu_files(const char* hyp_path, const char* ref_path,
                                  int smooth, char** report_json);
NMT_API nmt_status nmt_bleu_lines(const char* const* hypotheses,
                                  size_t n_hypotheses,
                                  const char* const* references,
                                  size_t n_references, int smooth,
                                  char** report_json);

/* ---- Backends ---------------------------------------------------------- */

/* "identity", "copy", or a shell command used as a line filter. */
NMT_API nmt_status nmt_backend_create(const char* spec, nmt_backend** out);
NMT_API nmt_status nmt_backend_set_timeout_ms(nmt_backend* backend,
                                              uint64_t timeout_ms);
NMT_API void nmt_backend_free(nmt_backend* backend);

/* Newline-separated lines in, newline-separated lines out. */
NMT_API nmt_status nmt_translate_text(const nmt_backend* backend,
                                      const char* text, char** out);

/* ---- Experiments ------------------------------------------------------- */

typedef struct nmt_run_options {
  const double* probabilities; /* strictly increasing; NULL for defaults */
  size_t n_probabilities;
  uint64_t seed;
  const char* dataset;         /* label for table rows; NULL -> "test" */
  const char* baseline_report; /* JSON report text; nullable */
  int parallel;
  int smooth;
} nmt_run_options;

NMT_API void nmt_run_options_init(nmt_run_options* options);

/* Natural-noise sweep. Writes a report (JSON array of condition records). */
NMT_API nmt_status nmt_sweep_natural(const char* test_path,
                                     const char* ref_path,
                                     const nmt_lexicon* lexicon,
                                     const nmt_backend* backend,
                                     const nmt_run_options* options,
                                     char** report_json);

/*
 * Synthetic-noise sweep: probability p uses clean 1-p and p/4 per noise
 * type. `alphabet` NULL selects the alphabet of the test file.
 */
NMT_API nmt_status nmt_sweep_synthetic(const char* test_path,
                                       const char* ref_path,
                                       const nmt_alphabet* alphabet,
                                       const nmt_backend* backend,
                                       const nmt_run_options* options,
                                       char** report_json);

/* The ten ablation plans derived from `default_mixture` as a JSON array. */
NMT_API nmt_status nmt_ablation_plans(const nmt_mixture* default_mixture,
                                      uint64_t seed, int renormalize,
                                      char** plans_json);

/* Scores one translation per ablation plan. */
NMT_API nmt_status nmt_ablate(const char* test_path, const char* ref_path,
                              const nmt_mixture* default_mixture,
                              int renormalize, const nmt_backend* backend,
                              const nmt_run_options* options,
                              char** report_json);

/*
 * Recomputes deltas of `report_json` against the matching conditions of
 * `baseline_json` (same dataset and name).
 */
NMT_API nmt_status nmt_report_attach_baselines(const char* report_json,
                                               const char* baseline_json,
                                               char** out_json);

/* Aligned text table for a report. */
NMT_API nmt_status nmt_report_render_table(const char* report_json,
                                           char** table);

#ifdef __cplusplus
}
#endif

#endif /* NMTNOISE_H_ */
