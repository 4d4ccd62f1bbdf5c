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


// Exercises the shared library through its C header only.

#include <gtest/gtest.h>

#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"
#include "nmtnoise.h"
#include "oracles.hpp"

namespace {

using nlohmann::json;

std::string take(char* s) {
  std::string out = s ? s : "";
  nmt_string_free(s);
  return out;
}

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(nmt_version(), "1.0.0");
  EXPECT_STRNE(nmt_status_string(NMT_ERR_PARSE), nmt_status_string(NMT_OK));
  nmt_string_free(nullptr);
  nmt_mixture_free(nullptr);
  nmt_alphabet_free(nullptr);
  nmt_lexicon_free(nullptr);
  nmt_backend_free(nullptr);
}

TEST(CApi, MixtureParseAndErrors) {
  nmt_mixture* m = nullptr;
  ASSERT_EQ(nmt_mixture_parse("del=0.5,clean=0.5", &m), NMT_OK);
  char* s = nullptr;
  ASSERT_EQ(nmt_mixture_to_string(m, &s), NMT_OK);
  EXPECT_EQ(take(s), "clean=0.5,del=0.5,ins=0,sub=0,swap=0");
  nmt_mixture_free(m);

  nmt_mixture* bad = nullptr;
  EXPECT_EQ(nmt_mixture_parse("clean=0.5", &bad), NMT_ERR_PARSE);
  EXPECT_EQ(bad, nullptr);
  EXPECT_NE(std::string(nmt_last_error()).find("sum"), std::string::npos);
  EXPECT_EQ(nmt_mixture_parse(nullptr, &bad), NMT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(nmt_mixture_parse("clean=1", nullptr), NMT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, NoiseTokenMatchesExemptionsAndDeterminism) {
  nmt_mixture* swap = nullptr;
  nmt_alphabet* alpha = nullptr;
  ASSERT_EQ(nmt_mixture_parse("swap=1", &swap), NMT_OK);
  ASSERT_EQ(nmt_alphabet_from_text("abc defgh", &alpha), NMT_OK);
  EXPECT_EQ(nmt_alphabet_size(alpha), 8u);
  char* out = nullptr;
  nmt_noise_type applied = NMT_NOISE_SWAP;
  ASSERT_EQ(nmt_noise_token("ab", swap, alpha, 1, 0, 0, 0, &out, &applied), NMT_OK);
  EXPECT_EQ(take(out), "ab");
  EXPECT_EQ(applied, NMT_NOISE_CLEAN);
  ASSERT_EQ(nmt_noise_token("abcd", swap, alpha, 1, 0, 0, 0, &out, &applied), NMT_OK);
  EXPECT_EQ(take(out), "acbd");
  EXPECT_EQ(applied, NMT_NOISE_SWAP);
  EXPECT_EQ(nmt_noise_token("a b", swap, alpha, 1, 0, 0, 0, &out, nullptr),
            NMT_ERR_INVALID_ARGUMENT);
  nmt_mixture_free(swap);
  nmt_alphabet_free(alpha);
}

TEST(CApi, NoiseFileAndEpochs) {
  testutil::TempDir dir;
  testutil::write_file(dir / "in.txt", "the whale swims\nnoise robust models\n");
  nmt_mixture* m = nullptr;
  ASSERT_EQ(nmt_mixture_default(&m), NMT_OK);
  char* stats = nullptr;
  const std::string in = (dir / "in.txt").string(), out = (dir / "out.txt").string();
  ASSERT_EQ(nmt_noise_file(in.c_str(), out.c_str(), m, nullptr, 3, 0, 2, &stats), NMT_OK);
  const json s = json::parse(take(stats));
  EXPECT_EQ(s["total_tokens"], 6);
  EXPECT_TRUE(s["applied"].contains("swap"));

  char* paths = nullptr;
  ASSERT_EQ(nmt_epoch_files(in.c_str(), out.c_str(), m, nullptr, 3, 0, 2, 1, &paths),
            NMT_OK);
  const json p = json::parse(take(paths));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(testutil::read_file(p[0].get<std::string>()), testutil::read_file(out));

  EXPECT_EQ(nmt_noise_file("/no/such/file", out.c_str(), m, nullptr, 0, 0, 1, nullptr),
            NMT_ERR_IO);
  nmt_mixture_free(m);
}

TEST(CApi, LexiconInjectAndSweep) {
  testutil::TempDir dir;
  testutil::write_file(dir / "lex.tsv", "# comment\nwhale\twhle\n");
  testutil::write_file(dir / "bad.tsv", "whale\twhale\n");
  testutil::write_file(dir / "test.txt", "the whale sings today\na whale song is long\n");
  nmt_lexicon* lex = nullptr;
  ASSERT_EQ(nmt_lexicon_load((dir / "lex.tsv").c_str(), &lex), NMT_OK);
  EXPECT_EQ(nmt_lexicon_size(lex), 1u);
  char* digest = nullptr;
  ASSERT_EQ(nmt_lexicon_digest(lex, &digest), NMT_OK);
  EXPECT_EQ(take(digest).substr(0, 8), "fnv1a64:");

  nmt_lexicon* bad = nullptr;
  EXPECT_EQ(nmt_lexicon_load((dir / "bad.tsv").c_str(), &bad), NMT_ERR_PARSE);
  EXPECT_NE(std::string(nmt_last_error()).find(":1:"), std::string::npos);

  char* stats = nullptr;
  ASSERT_EQ(nmt_inject_file((dir / "test.txt").c_str(), (dir / "out.txt").c_str(), lex,
                            1.0, 0, &stats),
            NMT_OK);
  EXPECT_EQ(take(stats), R"({"total_tokens":9,"eligible_tokens":2,"noised_tokens":2})");
  EXPECT_EQ(testutil::read_file(dir / "out.txt"), "the whle sings today\na whle song is long\n");
  EXPECT_EQ(nmt_inject_file((dir / "test.txt").c_str(), (dir / "o.txt").c_str(), lex,
                            2.0, 0, nullptr),
            NMT_ERR_INVALID_ARGUMENT);

  nmt_backend* copy = nullptr;
  ASSERT_EQ(nmt_backend_create("copy", &copy), NMT_OK);
  nmt_run_options opts;
  nmt_run_options_init(&opts);
  opts.dataset = "toy";
  char* report = nullptr;
  ASSERT_EQ(nmt_sweep_natural((dir / "test.txt").c_str(), (dir / "test.txt").c_str(),
                              lex, copy, &opts, &report),
            NMT_OK);
  const std::string text = take(report);
  const json r = json::parse(text);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0]["bleu"], 100.0);
  EXPECT_EQ(r[0]["dataset"], "toy");

  opts.baseline_report = text.c_str();
  ASSERT_EQ(nmt_sweep_natural((dir / "test.txt").c_str(), (dir / "test.txt").c_str(),
                              lex, copy, &opts, &report),
            NMT_OK);
  EXPECT_EQ(json::parse(take(report))[3]["delta"], 0.0);

  char* table = nullptr;
  ASSERT_EQ(nmt_report_render_table(text.c_str(), &table), NMT_OK);
  EXPECT_EQ(take(table).rfind("Dataset", 0), 0u);
  nmt_backend_free(copy);
  nmt_lexicon_free(lex);
}

TEST(CApi, BleuLinesAndFiles) {
  const char* hyp[] = {"the the the"};
  const char* ref[] = {"the cat"};
  char* report = nullptr;
  ASSERT_EQ(nmt_bleu_lines(hyp, 1, ref, 1, 0, &report), NMT_OK);
  const json r = json::parse(take(report));
  EXPECT_EQ(r["precisions"][0].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(nmt_bleu_lines(hyp, 1, ref, 0, 0, &report), NMT_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(nmt_last_error()).find("1 hypotheses vs 0 references"),
            std::string::npos);
}

TEST(CApi, BackendTranslateAndFailures) {
  nmt_backend* b = nullptr;
  ASSERT_EQ(nmt_backend_create("tr A-Z a-z", &b), NMT_OK);
  char* out = nullptr;
  ASSERT_EQ(nmt_translate_text(b, "A\nBc\n", &out), NMT_OK);
  EXPECT_EQ(take(out), "a\nbc\n");
  nmt_backend_free(b);

  ASSERT_EQ(nmt_backend_create("sleep 20", &b), NMT_OK);
  ASSERT_EQ(nmt_backend_set_timeout_ms(b, 200), NMT_OK);
  EXPECT_EQ(nmt_translate_text(b, "x\n", &out), NMT_ERR_BACKEND);
  nmt_backend_free(b);
}

TEST(CApi, AblationPlansAndReports) {
  char* plans = nullptr;
  ASSERT_EQ(nmt_ablation_plans(nullptr, 0, 0, &plans), NMT_OK);
  const json p = json::parse(take(plans));
  ASSERT_EQ(p.size(), 10u);
  EXPECT_EQ(p[9]["name"], "− Swap");

  const std::string report = R"([
    {"name":"natural p=0","dataset":"de-en","bleu":33.53},
    {"name":"natural p=1","dataset":"de-en","bleu":23.34}])";
  const std::string base = R"([
    {"name":"natural p=0","dataset":"de-en","bleu":34.20},
    {"name":"natural p=1","dataset":"de-en","bleu":12.49}])";
  char* merged = nullptr;
  ASSERT_EQ(nmt_report_attach_baselines(report.c_str(), base.c_str(), &merged), NMT_OK);
  const json m = json::parse(take(merged));
  EXPECT_EQ(m[0]["delta"].get<double>(), -0.67);
  EXPECT_EQ(m[1]["delta"].get<double>(), 10.85);
  EXPECT_EQ(nmt_report_attach_baselines("[", base.c_str(), &merged), NMT_ERR_PARSE);
}

}  // namespace
