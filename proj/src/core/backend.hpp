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

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nmtnoise {

// A translation system seen as a line-aligned filter.
struct TranslatorBackend {
  enum class Kind { kIdentity, kCopy, kSubprocess };

  Kind kind = Kind::kIdentity;
  // Run through /bin/sh -c. One input line per stdin line; the command must
  // print exactly one output line per input line.
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};

  static TranslatorBackend identity() { return {Kind::kIdentity, {}, {}}; }
  static TranslatorBackend copy() { return {Kind::kCopy, {}, {}}; }
  static TranslatorBackend subprocess(std::string command);

  // "identity", "copy", or any other string as a subprocess command.
  static TranslatorBackend parse(const std::string& spec);

  // "identity", "copy", or "subprocess:<command>".
  std::string identity_string() const;
};

struct TranslateContext {
  // Substituted for "{key}" in the command and exported as NMTNOISE_<KEY>
  // (upper-cased) in the child environment.
  std::map<std::string, std::string> variables;
  // Child working directory; empty means the caller's.
  std::filesystem::path working_directory;
};

// Throws BackendError on nonzero exit, signal, timeout, or when the output
// line count differs from the input; the message carries the stderr tail.
std::vector<std::string> translate(const std::vector<std::string>& lines,
                                   const TranslatorBackend& backend,
                                   const TranslateContext& context = {});

// One-line round trip; throws BackendError if it fails.
void probe(const TranslatorBackend& backend,
           const TranslateContext& context = {});

// "{key}" -> value for every variable.
std::string expand_command(const std::string& command,
                           const std::map<std::string, std::string>& variables);

}  // namespace nmtnoise
