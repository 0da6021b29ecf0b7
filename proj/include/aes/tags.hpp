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

#include <string>
#include <string_view>

// Penn Treebank tag groupings shared by every feature module.
namespace aes::tags {

// Punctuation and symbol tags. Tokens carrying these are not words.
bool is_punctuation(std::string_view tag);
inline bool is_word(std::string_view tag) { return !is_punctuation(tag); }

bool is_noun(std::string_view tag);         // NN NNS NNP NNPS
bool is_proper_noun(std::string_view tag);  // NNP NNPS
bool is_pronoun(std::string_view tag);      // PRP PRP$ WP WP$
bool is_personal_pronoun(std::string_view tag);    // PRP
bool is_possessive_pronoun(std::string_view tag);  // PRP$ WP$
bool is_adjective(std::string_view tag);    // JJ JJR JJS
bool is_adverb(std::string_view tag);       // RB RBR RBS
bool is_conjunction(std::string_view tag);  // CC
bool is_interjection(std::string_view tag); // UH
bool is_determiner(std::string_view tag);   // DT PDT WDT
bool is_preposition(std::string_view tag);  // IN TO
bool is_verb(std::string_view tag);         // VB VBD VBG VBN VBP VBZ
bool is_wh_pronoun(std::string_view tag);   // WP WP$
bool is_modal(std::string_view tag);        // MD
// Lexical (content) words: nouns, verbs, adjectives, adverbs.
bool is_lexical(std::string_view tag);

}  // namespace aes::tags

namespace aes::text {

// ASCII case folding; bytes >= 0x80 pass through untouched.
std::string fold_case(std::string_view s);

bool is_alphabetic(std::string_view s);

}  // namespace aes::text
