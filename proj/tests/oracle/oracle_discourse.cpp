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

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>

#include "aes/discfeat.hpp"
#include "aes/treeops.hpp"
#include "testing.hpp"

using namespace aes;

namespace {

bool in(const std::string& tag, std::initializer_list<const char*> set) {
  return std::any_of(set.begin(), set.end(), [&](const char* s) { return tag == s; });
}

bool noun(const std::string& t) { return in(t, {"NN", "NNS", "NNP", "NNPS"}); }
bool lexical(const std::string& t) {
  return noun(t) || in(t, {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "JJ", "JJR", "JJS", "RB",
                           "RBR", "RBS"});
}

std::string lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

// Items per sentence as plain lists (duplicates kept).
using Items = std::vector<std::vector<std::string>>;

struct AllItems {
  Items content, noun, stem, argument;
};

AllItems items(const EssayDoc& doc) {
  AllItems a;
  for (const Sentence& s : doc.sentences) {
    std::vector<std::string> c, n, st, arg;
    for (const Token& t : s.tokens) {
      if (lexical(t.pos)) {
        c.push_back(lower(t.form));
        st.push_back(lower(stem_of(t)));
      }
      if (noun(t.pos)) {
        n.push_back(lower(t.form));
        arg.push_back(lower(stem_of(t)));
      }
      if (t.pos == "PRP") arg.push_back(lower(t.form));
    }
    a.content.push_back(c);
    a.noun.push_back(n);
    a.stem.push_back(st);
    a.argument.push_back(arg);
  }
  return a;
}

bool share(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  for (const auto& a : x) {
    for (const auto& b : y) {
      if (a == b) return true;
    }
  }
  return false;
}

std::pair<double, double> brute(const Items& s) {
  const std::size_t n = s.size();
  if (n < 2) return {0.0, 0.0};
  std::size_t adjacent = 0, any = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++pairs;
      if (share(s[i], s[j])) {
        ++any;
        if (j == i + 1) ++adjacent;
      }
    }
  }
  return {double(adjacent) / double(n - 1), double(any) / double(pairs)};
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("oracle: overlap equals brute-force pair enumeration") {
  testing::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const EssayDoc doc = testing::random_doc(rng, "o" + std::to_string(trial), 1, 9);
    const AllItems a = items(doc);
    const OverlapFeatures f = disc::overlap_features(doc);
    const auto c = brute(a.content), n = brute(a.noun), s = brute(a.stem), g = brute(a.argument);
    CHECK(f.content_local == c.first);
    CHECK(f.content_global == c.second);
    CHECK(f.noun_local == n.first);
    CHECK(f.noun_global == n.second);
    CHECK(f.stem_local == s.first);
    CHECK(f.stem_global == s.second);
    CHECK(f.argument_local == g.first);
    CHECK(f.argument_global == g.second);
  }
}

// The sixteen transition probabilities are count/total; "sum to one" is
// asserted where it is exact: integer counts sum to the total and every
// probability is that count over the total. The floating-point sum itself
// is within a few ulp of 1.
TEST_CASE("oracle: entity-grid transitions sum to one or are all zero") {
  testing::Rng rng(22);
  std::size_t nonzero = 0, zero = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const EssayDoc doc = testing::random_doc(rng, "g" + std::to_string(trial), 1, 8);
    const EntityGrid grid = disc::build_entity_grid(tree::parse_sentences(doc, "Disc-Entities"));
    const EntityFeatures f = disc::entity_features(grid);
    std::size_t total = 0;
    for (std::size_t c : f.transition_counts) total += c;
    const std::size_t sentences = doc.sentences.size();
    CHECK(total == grid.entities.size() * (sentences - 1));
    if (total == 0) {
      ++zero;
      for (double p : f.transitions) CHECK(p == 0.0);
      continue;
    }
    ++nonzero;
    double sum = 0;
    for (std::size_t k = 0; k < 16; ++k) {
      CHECK(f.transitions[k] == double(f.transition_counts[k]) / double(total));
      sum += f.transitions[k];
    }
    CHECK(std::abs(sum - 1.0) <= 8 * DBL_EPSILON);
  }
  CHECK(nonzero > 100);
  CHECK(zero > 0);
}

// Independent grid: walk every NP, take its rightmost noun child.
TEST_CASE("oracle: entity-grid cells") {
  testing::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const EssayDoc doc = testing::random_doc(rng, "c" + std::to_string(trial), 1, 6);
    const auto trees = tree::parse_sentences(doc, "Disc-Entities");
    std::map<std::string, std::vector<int>> grid;  // role rank: 0 S, 1 O, 2 X, 3 absent
    for (std::size_t s = 0; s < trees.size(); ++s) {
      const ParseTree& t = trees[s];
      for (int id = 0; id < static_cast<int>(t.size()); ++id) {
        if (t.node(id).label != "NP") continue;
        std::string head;
        for (int c : t.node(id).children) {
          if (t.is_terminal(c) && noun(t.node(c).label)) head = lower(t.node(c).word);
        }
        if (head.empty()) continue;
        const int parent = t.node(id).parent;
        int role = 2;
        if (parent >= 0 && t.node(parent).label == "VP") role = 1;
        if (parent >= 0 && t.node(parent).label == "S") {
          const auto& sib = t.node(parent).children;
          const auto it = std::find(sib.begin(), sib.end(), id);
          if (it + 1 != sib.end() && t.node(*(it + 1)).label == "VP") role = 0;
        }
        auto& row = grid[head];
        row.resize(trees.size(), 3);
        row[s] = std::min(row[s], role);
      }
    }
    const EntityGrid g = disc::build_entity_grid(trees);
    REQUIRE(g.entities.size() == grid.size());
    std::size_t e = 0;
    for (const auto& [name, row] : grid) {
      CHECK(g.entities[e] == name);
      for (std::size_t s = 0; s < row.size(); ++s) CHECK(static_cast<int>(g.cells[e][s]) == row[s]);
      ++e;
    }
  }
}

}  // TEST_SUITE
