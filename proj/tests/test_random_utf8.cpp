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

#include <cmath>
#include <set>
#include <string>

#include "core/errors.hpp"
#include "core/random.hpp"
#include "core/utf8.hpp"

namespace nmtnoise {
namespace {

TEST(Utf8, RoundTripsMixedScripts) {
  const std::string text = "naïve Ωmega 日本 \xF0\x9F\x98\x80";
  const std::u32string chars = utf8::decode(text);
  EXPECT_EQ(chars.size(), 16u);
  EXPECT_EQ(chars[2], U'ï');
  EXPECT_EQ(chars.back(), U'\U0001F600');
  EXPECT_EQ(utf8::encode(chars), text);
}

TEST(Utf8, RejectsMalformedInput) {
  for (const std::string bad :
       {"\xC3", "\xC0\xAF", "\xED\xA0\x80", "\xF4\x90\x80\x80", "ab\x80",
        "\xE2\x82"}) {
    EXPECT_FALSE(utf8::is_valid(bad)) << "case " << bad.size();
    EXPECT_THROW(utf8::decode(bad), ParseError);
  }
  EXPECT_TRUE(utf8::is_valid(""));
  EXPECT_TRUE(utf8::is_valid("plain"));
}

TEST(Utf8, WhitespaceFollowsUnicode) {
  for (char32_t c : {U' ', U'\t', U'\n', U'\r', U'\v', U'\f', U' ',
                     U' ', U'　', U' ', U'\u0085'}) {
    EXPECT_TRUE(utf8::is_whitespace(c)) << static_cast<uint32_t>(c);
  }
  for (char32_t c : {U'a', U'_', U'​', U'é', U'-'}) {
    EXPECT_FALSE(utf8::is_whitespace(c)) << static_cast<uint32_t>(c);
  }
}

TEST(RandomSource, SameSeedSameStream) {
  RandomSource a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(RandomSource, DeriveIsOrderSensitiveAndPure) {
  const RandomSource root(7);
  EXPECT_EQ(root.derive(1).state(), root.derive(1).state());
  EXPECT_NE(root.derive(1).derive(2).state(), root.derive(2).derive(1).state());
  EXPECT_NE(root.derive(1).state(), root.derive(2).state());
}

TEST(RandomSource, DeriveSeedSeparatesEveryCoordinate) {
  std::set<uint64_t> states;
  for (uint64_t seed : {0, 1})
    for (uint64_t epoch : {0, 1})
      for (uint64_t line : {0, 1})
        for (uint64_t token : {0, 1})
          states.insert(derive_seed(seed, epoch, line, token).state());
  EXPECT_EQ(states.size(), 16u);
}

TEST(RandomSource, UniformBelowStaysInRangeAndCoversIt) {
  RandomSource rng(3);
  constexpr uint64_t kBound = 7;
  std::array<int, kBound> hist{};
  constexpr int kDraws = 70000;
  for (int i = 0; i < kDraws; ++i) {
    const uint64_t x = rng.uniform_below(kBound);
    ASSERT_LT(x, kBound);
    ++hist[x];
  }
  // Chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile.
  double chi2 = 0.0;
  const double expected = static_cast<double>(kDraws) / kBound;
  for (int h : hist) chi2 += (h - expected) * (h - expected) / expected;
  EXPECT_LT(chi2, 22.46);
  EXPECT_EQ(RandomSource(5).uniform_below(1), 0u);
}

TEST(RandomSource, Uniform01IsHalfOpenWithPlausibleMean) {
  RandomSource rng(11);
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is about 0.0009.
  EXPECT_NEAR(sum / kDraws, 0.5, 0.005);
}

}  // namespace
}  // namespace nmtnoise
