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

#include <array>
#include <span>
#include <string>

namespace aes {

struct EssayDoc;
struct Token;

// Share of word tokens carrying each tag group.
struct PosDensities {
  double nouns = 0, proper_nouns = 0, pronouns = 0, personal_pronouns = 0;
  double adjectives = 0, adverbs = 0, conjunctions = 0, interjections = 0;
  double determiners = 0, prepositions = 0, verbs = 0, wh_pronouns = 0;
  double vbd = 0, vbg = 0, vbn = 0, vbp = 0, vbz = 0, modals = 0;
};

// Lexical variation ratios over lexical (content) words. Every ratio is 0
// when its denominator is 0.
struct LexicalVariation {
  double noun_variation = 0;
  double adjective_variation = 0;
  double adverb_variation = 0;
  double modifier_variation = 0;
  double verb_variation1 = 0;          // verb types / verb tokens
  double verb_variation2 = 0;          // verb types / lexical tokens
  double squared_verb_variation1 = 0;  // verb types^2 / verb tokens
  double corrected_verb_variation1 = 0;// verb types / sqrt(2 * verb tokens)
  double lexical_words = 0;            // lexical tokens / word tokens
};

namespace pos {

// Throws UndefinedInputError when the essay has no word tokens.
PosDensities pos_density(const EssayDoc& doc);
PosDensities pos_density(std::span<const Token> words);

LexicalVariation lexical_variation(const EssayDoc& doc);
LexicalVariation lexical_variation(std::span<const Token> words);

// Case-folded lemma when present, else case-folded form.
std::string verb_type(const Token& token);

}  // namespace pos
}  // namespace aes
