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
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aes/annotate.hpp"
#include "aes/treeops.hpp"

namespace aes {

// Word-overlap coherence: share of sentence pairs that have at least one
// item in common, over adjacent pairs (local) and all unordered pairs
// (global).
struct OverlapFeatures {
  double content_local = 0, content_global = 0;
  double noun_local = 0, noun_global = 0;
  double stem_local = 0, stem_global = 0;
  double argument_local = 0, argument_global = 0;
};

struct RefExFeatures {
  double definite_articles_per_word = 0, definite_articles_per_sentence = 0;
  double pronouns_per_word = 0, pronouns_per_sentence = 0;
  double personal_pronouns_per_word = 0, personal_pronouns_per_sentence = 0;
  double possessive_pronouns_per_word = 0, possessive_pronouns_per_sentence = 0;
  double pronouns_per_noun = 0, proper_nouns_per_noun = 0;
};

// All rates are per sentence. discourse is the sum of the four sense rates
// and all is discourse + non_discourse.
struct ConnectiveFeatures {
  double discourse = 0, non_discourse = 0, all = 0;
  double expansion = 0, contingency = 0, comparison = 0, temporal = 0;
};

enum class GridRole { subject = 0, object = 1, other = 2, absent = 3 };
inline constexpr int kNumGridRoles = 4;
char role_symbol(GridRole r);  // S O X -

struct EntityGrid {
  std::vector<std::string> entities;           // sorted, case-folded heads
  std::vector<std::vector<GridRole>> cells;    // [entity][sentence]
  std::size_t sentences = 0;
  std::size_t mentions = 0;
  std::size_t mention_words = 0;
};

struct EntityFeatures {
  // transitions[from * 4 + to], roles ordered S, O, X, -.
  std::array<double, 16> transitions{};
  std::array<std::size_t, 16> transition_counts{};
  double entities_per_sentence = 0;
  double entities_per_text = 0;
  double unique_entities = 0;
  double words_per_entity = 0;
};

struct ChainFeatures {
  double average_length = 0;
  // Indexed by MentionKind, `other` included as the remainder.
  std::array<double, kNumMentionKinds> proportions{};
};

// Explicit connective lexicon: case-insensitive, multi-word entries, one
// majority sense each.
class ConnectiveLexicon {
 public:
  struct Match {
    std::size_t length = 0;
    ConnectiveSense sense = ConnectiveSense::none;
  };

  ConnectiveLexicon() = default;

  // TSV: form<TAB>sense; '#' comments and blank lines ignored.
  static ConnectiveLexicon load(const std::filesystem::path& path);
  static ConnectiveLexicon parse(std::istream& in);

  void add(const std::string& form, ConnectiveSense sense);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Longest entry starting at token `index`.
  std::optional<Match> match_at(std::span<const Token> tokens, std::size_t index) const;

 private:
  std::map<std::vector<std::string>, ConnectiveSense> entries_;
  std::size_t max_words_ = 0;
};

struct ConnectiveTag {
  bool is_connective = false;
  ConnectiveUsage usage = ConnectiveUsage::non_discourse;
  ConnectiveSense sense = ConnectiveSense::none;
  std::size_t length = 0;  // tokens covered
};

namespace disc {

OverlapFeatures overlap_features(const EssayDoc& doc);

// Throws UndefinedInputError when the essay has no word tokens.
RefExFeatures refex_features(const EssayDoc& doc);

// Annotated sentences are returned verbatim. Otherwise the lexicon decides
// membership and sense, and the parse decides usage: discourse when the
// lowest phrase covering the connective is S, SBAR or PRN, an ADVP directly
// under S or SBAR, or (for CC) a phrase dominating at least two S nodes.
ConnectiveTag classify_connective(const Sentence& sentence, std::size_t index,
                                  const ConnectiveLexicon& lexicon,
                                  const ParseTree* tree = nullptr);

ConnectiveFeatures connective_features(const EssayDoc& doc, const ConnectiveLexicon& lexicon);

EntityGrid build_entity_grid(std::span<const ParseTree> trees);
EntityFeatures entity_features(const EntityGrid& grid);
EntityFeatures entity_grid_features(const EssayDoc& doc);

ChainFeatures chain_features(const EssayDoc& doc);

}  // namespace disc
}  // namespace aes
