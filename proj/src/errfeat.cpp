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

#include "aes/errfeat.hpp"

#include <fstream>
#include <istream>

#include "aes/errors.hpp"
#include "aes/tags.hpp"

namespace aes {

Dictionary Dictionary::parse(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    words.insert(text::fold_case(line));
  }
  return Dictionary(std::move(words));
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dictionary '" + path.string() + "'");
  return parse(in);
}

namespace err {
namespace {

bool starts_with_vowel(const std::string& folded) {
  return !folded.empty() && std::string_view("aeiou").find(folded[0]) != std::string_view::npos;
}

}  // namespace

ErrorProfile error_features(std::span<const ErrorAnnotation> errors, std::size_t sentences) {
  std::size_t spelling = 0, other = 0;
  for (const ErrorAnnotation& e : errors) {
    if (e.kind == ErrorKind::spelling) {
      ++spelling;
    } else {
      ++other;
    }
  }
  ErrorProfile p;
  if (sentences > 0) {
    p.spelling_per_sentence = static_cast<double>(spelling) / static_cast<double>(sentences);
    p.non_spelling_per_sentence = static_cast<double>(other) / static_cast<double>(sentences);
  }
  p.all_per_sentence = p.spelling_per_sentence + p.non_spelling_per_sentence;
  if (spelling + other > 0) {
    p.spelling_share = static_cast<double>(spelling) / static_cast<double>(spelling + other);
  }
  return p;
}

ErrorProfile error_features(const EssayDoc& doc, const Dictionary* dictionary) {
  if (doc.errors) return error_features(*doc.errors, doc.sentences.size());
  if (!dictionary) throw MissingLayerError(doc.id, "errors", "Error");
  return error_features(fallback_check(doc, *dictionary), doc.sentences.size());
}

std::vector<ErrorAnnotation> fallback_check(const EssayDoc& doc, const Dictionary& dictionary) {
  if (dictionary.empty()) throw ConfigError("fallback error checker needs a non-empty dictionary");
  std::vector<ErrorAnnotation> out;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const auto& tokens = doc.sentences[si].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (!text::is_alphabetic(t.form)) continue;
      const std::string folded = text::fold_case(t.form);
      if (!tags::is_proper_noun(t.pos) && !dictionary.contains(folded)) {
        out.push_back({si, ErrorKind::spelling, i, i});
      }
      if (i + 1 < tokens.size() && text::is_alphabetic(tokens[i + 1].form)) {
        const std::string next = text::fold_case(tokens[i + 1].form);
        if (next == folded) out.push_back({si, ErrorKind::non_spelling, i, i + 1});
        if ((folded == "a" && starts_with_vowel(next)) ||
            (folded == "an" && !starts_with_vowel(next))) {
          out.push_back({si, ErrorKind::non_spelling, i, i + 1});
        }
      }
    }
  }
  return out;
}

}  // namespace err
}  // namespace aes
