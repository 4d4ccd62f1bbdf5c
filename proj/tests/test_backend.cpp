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


#include <gtest/gtest.h>

#include <chrono>
#include <string>
#include <vector>

#include "core/backend.hpp"
#include "core/errors.hpp"
#include "oracles.hpp"

namespace nmtnoise {
namespace {

using Lines = std::vector<std::string>;

TEST(Backend, IdentityAndCopyReturnInput) {
  const Lines in = {"a b", "", "ünïcode"};
  EXPECT_EQ(translate(in, TranslatorBackend::identity()), in);
  EXPECT_EQ(translate(in, TranslatorBackend::copy()), in);
  EXPECT_EQ(translate({"a b"}, TranslatorBackend::identity()), Lines{"a b"});
}

TEST(Backend, ParseSpec) {
  EXPECT_EQ(TranslatorBackend::parse("identity").kind, TranslatorBackend::Kind::kIdentity);
  EXPECT_EQ(TranslatorBackend::parse("copy").kind, TranslatorBackend::Kind::kCopy);
  const auto sub = TranslatorBackend::parse("tr A-Z a-z");
  EXPECT_EQ(sub.kind, TranslatorBackend::Kind::kSubprocess);
  EXPECT_EQ(sub.identity_string(), "subprocess:tr A-Z a-z");
  EXPECT_THROW(TranslatorBackend::parse(""), ContractViolation);
}

TEST(Backend, LowercasingCommand) {
  const auto b = TranslatorBackend::subprocess("tr A-Z a-z");
  EXPECT_EQ(translate({"A"}, b), Lines{"a"});
  EXPECT_EQ(translate({"Hello World", "", "XY"}, b),
            (Lines{"hello world", "", "xy"}));
}

TEST(Backend, LargeInputDoesNotDeadlock) {
  Lines in(200000, "a line long enough to fill pipe buffers quickly");
  const auto out = translate(in, TranslatorBackend::subprocess("cat"));
  EXPECT_EQ(out, in);
}

TEST(Backend, MissingLineIsFailure) {
  const auto b = TranslatorBackend::subprocess("head -n 2");
  try {
    translate({"1", "2", "3"}, b);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(Backend, NonzeroExitIsFailureWithStderr) {
  const auto b = TranslatorBackend::subprocess("cat; echo boom >&2; exit 3");
  try {
    translate({"x"}, b);
    FAIL();
  } catch (const BackendError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("3"), std::string::npos) << what;
    EXPECT_NE(what.find("boom"), std::string::npos) << what;
  }
}

TEST(Backend, CommandThatIgnoresInputStillWorks) {
  // Exits without reading stdin; the write side must not die of SIGPIPE.
  Lines in(50000, "ignored input line");
  const auto b = TranslatorBackend::subprocess("yes out | head -n 50000");
  EXPECT_EQ(translate(in, b).size(), in.size());
}

TEST(Backend, TimeoutKillsTheProcess) {
  auto b = TranslatorBackend::subprocess("sleep 30");
  b.timeout = std::chrono::milliseconds(300);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(translate({"x"}, b), BackendError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(Backend, VariablesReachCommandAndEnvironment) {
  TranslateContext ctx;
  ctx.variables = {{"slug", "minus-swap"}, {"plan", "− Swap"}};
  const auto b = TranslatorBackend::subprocess(
      "while read -r l; do echo \"{slug} $NMTNOISE_PLAN $l\"; done");
  EXPECT_EQ(translate({"x"}, b, ctx), Lines{"minus-swap − Swap x"});
  EXPECT_EQ(expand_command("run {a} {b} {c}", {{"a", "1"}, {"b", "2"}}),
            "run 1 2 {c}");
}

TEST(Backend, WorkingDirectory) {
  testutil::TempDir dir;
  TranslateContext ctx;
  ctx.working_directory = dir.path();
  const auto out = translate({"x"}, TranslatorBackend::subprocess("cat >/dev/null; pwd"), ctx);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(std::filesystem::canonical(out[0]), std::filesystem::canonical(dir.path()));
}

TEST(Backend, Probe) {
  EXPECT_NO_THROW(probe(TranslatorBackend::subprocess("cat")));
  EXPECT_THROW(probe(TranslatorBackend::subprocess("true")), BackendError);
  EXPECT_THROW(probe(TranslatorBackend::subprocess("/no/such/binary")), BackendError);
}

}  // namespace
}  // namespace nmtnoise
