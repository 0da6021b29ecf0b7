// Copyright 2026 The aesfeat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "aes/annotate.hpp"

namespace aes {

struct ErrorProfile {
  double spelling_per_sentence = 0;
  double non_spelling_per_sentence = 0;
  double all_per_sentence = 0;  // spelling + non-spelling, summed as doubles
  double spelling_share = 0;    // 0 when the essay has no errors
};

// Word list for the fallback checker, one case-folded word per line.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  static Dictionary load(const std::filesystem::path& path);
  static Dictionary parse(std::istream& in);

  bool contains(const std::string& folded) const { return words_.count(folded) > 0; }
  bool empty() const { return words_.empty(); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

namespace err {

ErrorProfile error_features(std::span<const ErrorAnnotation> errors, std::size_t sentences);

// Uses the essay's own error annotations when present, otherwise runs
// fallback_check with `dictionary`. Throws MissingLayerError when neither is
// available.
ErrorProfile error_features(const EssayDoc& doc, const Dictionary* dictionary = nullptr);

// Minimal checker: a spelling error is an alphabetic, non-proper-noun token
// missing from the dictionary; non-spelling errors are an immediately
// repeated word and a/an disagreeing with the next word's initial letter.
// Throws ConfigError on an empty dictionary.
std::vector<ErrorAnnotation> fallback_check(const EssayDoc& doc, const Dictionary& dictionary);

}  // namespace err
}  // namespace aes
