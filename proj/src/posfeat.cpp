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

#include "aes/posfeat.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "aes/annotate.hpp"
#include "aes/errors.hpp"
#include "aes/tags.hpp"

namespace aes::pos {
namespace {

std::vector<Token> word_tokens(const EssayDoc& doc) {
  std::vector<Token> out;
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) {
      if (tags::is_word(t.pos)) out.push_back(t);
    }
  }
  return out;
}

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

std::string verb_type(const Token& token) {
  if (token.lemma && !token.lemma->empty()) return text::fold_case(*token.lemma);
  return text::fold_case(token.form);
}

PosDensities pos_density(std::span<const Token> words) {
  if (words.empty()) throw UndefinedInputError("POS densities need at least one word token");
  std::array<std::size_t, 18> c{};
  for (const Token& t : words) {
    const std::string& p = t.pos;
    c[0] += tags::is_noun(p);
    c[1] += tags::is_proper_noun(p);
    c[2] += tags::is_pronoun(p);
    c[3] += tags::is_personal_pronoun(p);
    c[4] += tags::is_adjective(p);
    c[5] += tags::is_adverb(p);
    c[6] += tags::is_conjunction(p);
    c[7] += tags::is_interjection(p);
    c[8] += tags::is_determiner(p);
    c[9] += tags::is_preposition(p);
    c[10] += tags::is_verb(p);
    c[11] += tags::is_wh_pronoun(p);
    c[12] += p == "VBD";
    c[13] += p == "VBG";
    c[14] += p == "VBN";
    c[15] += p == "VBP";
    c[16] += p == "VBZ";
    c[17] += tags::is_modal(p);
  }
  const double n = static_cast<double>(words.size());
  auto d = [&](int i) { return static_cast<double>(c[static_cast<std::size_t>(i)]) / n; };
  return PosDensities{d(0),  d(1),  d(2),  d(3),  d(4),  d(5),  d(6),  d(7),  d(8),
                      d(9),  d(10), d(11), d(12), d(13), d(14), d(15), d(16), d(17)};
}

PosDensities pos_density(const EssayDoc& doc) { return pos_density(word_tokens(doc)); }

LexicalVariation lexical_variation(std::span<const Token> words) {
  std::size_t lexical = 0, nouns = 0, adjectives = 0, adverbs = 0, verbs = 0;
  std::set<std::string> verb_types;
  for (const Token& t : words) {
    if (tags::is_lexical(t.pos)) ++lexical;
    if (tags::is_noun(t.pos)) ++nouns;
    if (tags::is_adjective(t.pos)) ++adjectives;
    if (tags::is_adverb(t.pos)) ++adverbs;
    if (tags::is_verb(t.pos)) {
      ++verbs;
      verb_types.insert(verb_type(t));
    }
  }
  const double lex = static_cast<double>(lexical);
  const double vt = static_cast<double>(verb_types.size());
  const double vn = static_cast<double>(verbs);
  LexicalVariation v;
  v.noun_variation = ratio(static_cast<double>(nouns), lex);
  v.adjective_variation = ratio(static_cast<double>(adjectives), lex);
  v.adverb_variation = ratio(static_cast<double>(adverbs), lex);
  // Sum of the two parts so the additive identity holds bit for bit.
  v.modifier_variation = v.adjective_variation + v.adverb_variation;
  v.verb_variation1 = ratio(vt, vn);
  v.verb_variation2 = ratio(vt, lex);
  v.squared_verb_variation1 = ratio(vt * vt, vn);
  v.corrected_verb_variation1 = verbs > 0 ? vt / std::sqrt(2.0 * vn) : 0.0;
  v.lexical_words = ratio(lex, static_cast<double>(words.size()));
  return v;
}

LexicalVariation lexical_variation(const EssayDoc& doc) {
  return lexical_variation(word_tokens(doc));
}

}  // namespace aes::pos
