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

#include "aes/tags.hpp"

#include <algorithm>
#include <array>

namespace aes::tags {
namespace {

template <std::size_t N>
bool in(std::string_view tag, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

constexpr std::array<std::string_view, 10> kPunctuation = {
    ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "SYM", "#", "$"};

}  // namespace

bool is_punctuation(std::string_view tag) { return in(tag, kPunctuation); }

bool is_noun(std::string_view tag) {
  return in(tag, std::array<std::string_view, 4>{"NN", "NNS", "NNP", "NNPS"});
}
bool is_proper_noun(std::string_view tag) { return tag == "NNP" || tag == "NNPS"; }
bool is_pronoun(std::string_view tag) {
  return in(tag, std::array<std::string_view, 4>{"PRP", "PRP$", "WP", "WP$"});
}
bool is_personal_pronoun(std::string_view tag) { return tag == "PRP"; }
bool is_possessive_pronoun(std::string_view tag) { return tag == "PRP$" || tag == "WP$"; }
bool is_adjective(std::string_view tag) {
  return in(tag, std::array<std::string_view, 3>{"JJ", "JJR", "JJS"});
}
bool is_adverb(std::string_view tag) {
  return in(tag, std::array<std::string_view, 3>{"RB", "RBR", "RBS"});
}
bool is_conjunction(std::string_view tag) { return tag == "CC"; }
bool is_interjection(std::string_view tag) { return tag == "UH"; }
bool is_determiner(std::string_view tag) {
  return in(tag, std::array<std::string_view, 3>{"DT", "PDT", "WDT"});
}
bool is_preposition(std::string_view tag) { return tag == "IN" || tag == "TO"; }
bool is_verb(std::string_view tag) {
  return in(tag, std::array<std::string_view, 6>{"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"});
}
bool is_wh_pronoun(std::string_view tag) { return tag == "WP" || tag == "WP$"; }
bool is_modal(std::string_view tag) { return tag == "MD"; }
bool is_lexical(std::string_view tag) {
  return is_noun(tag) || is_verb(tag) || is_adjective(tag) || is_adverb(tag);
}

}  // namespace aes::tags

namespace aes::text {

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_alphabetic(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

}  // namespace aes::text
