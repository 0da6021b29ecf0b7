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

#include <doctest.h>

#include <cmath>

#include "aes/errors.hpp"
#include "aes/posfeat.hpp"
#include "testing.hpp"

using namespace aes;

namespace {

std::vector<Token> tagged(std::initializer_list<std::pair<const char*, const char*>> items) {
  std::vector<Token> out;
  for (const auto& [form, pos] : items) {
    Token t;
    t.form = form;
    t.pos = pos;
    t.index = out.size();
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_SUITE("unit") {

TEST_CASE("posfeat: densities exclude punctuation") {
  const EssayDoc doc =
      testing::doc_from_parses("p", {"(ROOT (S (NP (DT The) (NN cat)) (VP (VBD sat)) (. .)))"});
  const PosDensities d = pos::pos_density(doc);
  CHECK(d.nouns == 1.0 / 3.0);
  CHECK(d.determiners == 1.0 / 3.0);
  CHECK(d.vbd == 1.0 / 3.0);
  CHECK(d.verbs == 1.0 / 3.0);
  CHECK(d.pronouns == 0.0);
}

TEST_CASE("posfeat: no verbs and all nouns") {
  const auto nouns = tagged({{"cat", "NN"}, {"dogs", "NNS"}, {"Bo", "NNP"}});
  const PosDensities d = pos::pos_density(nouns);
  CHECK(d.nouns == 1.0);
  CHECK(d.proper_nouns == 1.0 / 3.0);
  CHECK(d.vbd + d.vbg + d.vbn + d.vbp + d.vbz + d.modals == 0.0);
  CHECK_THROWS_AS(pos::pos_density(std::vector<Token>{}), UndefinedInputError);
}

TEST_CASE("posfeat: variation by hand") {
  const auto v = pos::lexical_variation(tagged({{"a", "NN"}, {"b", "NN"}, {"go", "VB"}, {"red", "JJ"}}));
  CHECK(v.noun_variation == 0.5);
  CHECK(v.adjective_variation == 0.25);
  CHECK(v.verb_variation1 == 1.0);
  CHECK(v.lexical_words == 1.0);

  auto run = tagged({{"run", "VB"}, {"runs", "VBZ"}});
  run[1].lemma = "Run";
  const auto r = pos::lexical_variation(run);
  CHECK(r.verb_variation1 == 0.5);
  CHECK(r.squared_verb_variation1 == 0.5);
  CHECK(r.corrected_verb_variation1 == 0.5);
  CHECK(r.modifier_variation == 0.0);

  const auto none = pos::lexical_variation(tagged({{"the", "DT"}}));
  CHECK(none.verb_variation1 == 0.0);
  CHECK(none.corrected_verb_variation1 == 0.0);
  CHECK(none.noun_variation == 0.0);
}

TEST_CASE("posfeat: verb type prefers the lemma") {
  Token t;
  t.form = "Was";
  t.pos = "VBD";
  CHECK(pos::verb_type(t) == "was");
  t.lemma = "BE";
  CHECK(pos::verb_type(t) == "be");
}

}  // TEST_SUITE
