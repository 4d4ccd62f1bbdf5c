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

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace nmtnoise::utf8 {

// Decodes UTF-8 into Unicode scalar values. Overlong forms, surrogates and
// truncated sequences raise ParseError.
std::u32string decode(std::string_view text);

// Decodes the scalar starting at text[pos] and advances pos past it.
// nullopt (pos unchanged) on a malformed sequence. pos must be < size().
std::optional<char32_t> next_scalar(std::string_view text, size_t& pos);

// Encodes scalar values as UTF-8. Surrogates and values above U+10FFFF raise
// ContractViolation.
std::string encode(std::u32string_view chars);
void append(std::string& out, char32_t c);

// Unicode White_Space property.
bool is_whitespace(char32_t c);

bool is_valid(std::string_view text);

}  // namespace nmtnoise::utf8
