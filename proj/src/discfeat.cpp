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

#include "aes/discfeat.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "aes/errors.hpp"
#include "aes/tags.hpp"

namespace aes {

char role_symbol(GridRole r) {
  static constexpr char kSymbols[] = {'S', 'O', 'X', '-'};
  return kSymbols[static_cast<int>(r)];
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(text::fold_case(w));
  return out;
}

double ratio(std::size_t num, std::size_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

ConnectiveLexicon ConnectiveLexicon::parse(std::istream& in) {
  ConnectiveLexicon lex;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("connective lexicon line " + std::to_string(line_number) +
                           ": expected form<TAB>sense",
                       line_number);
    }
    auto sense = parse_connective_sense(line.substr(tab + 1));
    if (!sense || *sense == ConnectiveSense::none) {
      throw ParseError("connective lexicon line " + std::to_string(line_number) +
                           ": sense must be Expansion, Contingency, Comparison or Temporal",
                       line_number);
    }
    lex.add(line.substr(0, tab), *sense);
  }
  return lex;
}

ConnectiveLexicon ConnectiveLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open connective lexicon '" + path.string() + "'");
  return parse(in);
}

void ConnectiveLexicon::add(const std::string& form, ConnectiveSense sense) {
  std::vector<std::string> words = split_words(form);
  if (words.empty()) return;
  max_words_ = std::max(max_words_, words.size());
  entries_[std::move(words)] = sense;
}

std::optional<ConnectiveLexicon::Match> ConnectiveLexicon::match_at(
    std::span<const Token> tokens, std::size_t index) const {
  const std::size_t longest = std::min(max_words_, tokens.size() - std::min(index, tokens.size()));
  std::vector<std::string> key;
  for (std::size_t i = 0; i < longest; ++i) key.push_back(text::fold_case(tokens[index + i].form));
  for (std::size_t len = longest; len > 0; --len) {
    key.resize(len);
    auto it = entries_.find(key);
    if (it != entries_.end()) return Match{len, it->second};
  }
  return std::nullopt;
}

namespace disc {
namespace {

// Per-sentence item sets for the four overlap flavours.
struct OverlapSets {
  std::vector<std::set<std::string>> content, noun, stem, argument;
};

OverlapSets overlap_sets(const EssayDoc& doc) {
  OverlapSets s;
  for (const Sentence& sent : doc.sentences) {
    std::set<std::string> content, noun, stem, argument;
    for (const Token& t : sent.tokens) {
      const std::string form = text::fold_case(t.form);
      if (tags::is_lexical(t.pos)) {
        content.insert(form);
        stem.insert(text::fold_case(stem_of(t)));
      }
      if (tags::is_noun(t.pos)) {
        noun.insert(form);
        argument.insert(text::fold_case(stem_of(t)));
      }
      if (tags::is_personal_pronoun(t.pos)) argument.insert(form);
    }
    s.content.push_back(std::move(content));
    s.noun.push_back(std::move(noun));
    s.stem.push_back(std::move(stem));
    s.argument.push_back(std::move(argument));
  }
  return s;
}

// Inverted index: item -> sentences containing it; every pair of those
// sentences shares the item.
std::pair<double, double> local_global(const std::vector<std::set<std::string>>& sets) {
  const std::size_t n = sets.size();
  if (n < 2) return {0.0, 0.0};
  std::unordered_map<std::string, std::vector<std::size_t>> postings;
  for (std::size_t i = 0; i < n; ++i) {
    for (const std::string& item : sets[i]) postings[item].push_back(i);
  }
  std::vector<char> shared(n * n, 0);
  for (const auto& [item, list] : postings) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) shared[list[a] * n + list[b]] = 1;
    }
  }
  std::size_t adjacent = 0, any = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!shared[i * n + j]) continue;
      ++any;
      if (j == i + 1) ++adjacent;
    }
  }
  return {ratio(adjacent, n - 1), ratio(any, n * (n - 1) / 2)};
}

bool is_usage_phrase(const ParseTree& t, int node, bool coordinating) {
  const std::string& label = t.node(node).label;
  if (label == "S" || label == "SBAR" || label == "PRN") return true;
  const int parent = t.node(node).parent;
  if (label == "ADVP" && parent >= 0) {
    const std::string& pl = t.node(parent).label;
    if (pl == "S" || pl == "SBAR") return true;
  }
  if (coordinating) {
    std::size_t s_nodes = 0;
    for (int d = node + 1; d < t.node(node).subtree_end; ++d) {
      if (t.node(d).label == "S") ++s_nodes;
    }
    if (s_nodes >= 2) return true;
  }
  return false;
}

ConnectiveUsage heuristic_usage(const ParseTree& t, std::size_t index, std::size_t length) {
  const int first = t.leaves()[index];
  const int last = t.leaves()[index + length - 1];
  int node = t.node(first).parent;
  while (node >= 0 && node != last && !t.dominates(node, last)) node = t.node(node).parent;
  if (node < 0) return ConnectiveUsage::non_discourse;
  const bool coordinating = t.node(first).label == "CC";
  return is_usage_phrase(t, node, coordinating) ? ConnectiveUsage::discourse
                                                : ConnectiveUsage::non_discourse;
}

}  // namespace

OverlapFeatures overlap_features(const EssayDoc& doc) {
  const OverlapSets s = overlap_sets(doc);
  OverlapFeatures f;
  std::tie(f.content_local, f.content_global) = local_global(s.content);
  std::tie(f.noun_local, f.noun_global) = local_global(s.noun);
  std::tie(f.stem_local, f.stem_global) = local_global(s.stem);
  std::tie(f.argument_local, f.argument_global) = local_global(s.argument);
  return f;
}

RefExFeatures refex_features(const EssayDoc& doc) {
  std::size_t words = 0, nouns = 0, definite = 0, pronouns = 0, personal = 0, possessive = 0,
              proper = 0;
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) {
      if (!tags::is_word(t.pos)) continue;
      ++words;
      nouns += tags::is_noun(t.pos);
      proper += tags::is_proper_noun(t.pos);
      pronouns += tags::is_pronoun(t.pos);
      personal += tags::is_personal_pronoun(t.pos);
      possessive += tags::is_possessive_pronoun(t.pos);
      definite += t.pos == "DT" && text::fold_case(t.form) == "the";
    }
  }
  if (words == 0) throw UndefinedInputError("essay '" + doc.id + "' has no word tokens");
  const std::size_t sentences = doc.sentences.size();
  RefExFeatures f;
  f.definite_articles_per_word = ratio(definite, words);
  f.definite_articles_per_sentence = ratio(definite, sentences);
  f.pronouns_per_word = ratio(pronouns, words);
  f.pronouns_per_sentence = ratio(pronouns, sentences);
  f.personal_pronouns_per_word = ratio(personal, words);
  f.personal_pronouns_per_sentence = ratio(personal, sentences);
  f.possessive_pronouns_per_word = ratio(possessive, words);
  f.possessive_pronouns_per_sentence = ratio(possessive, sentences);
  f.pronouns_per_noun = ratio(pronouns, nouns);
  f.proper_nouns_per_noun = ratio(proper, nouns);
  return f;
}

ConnectiveTag classify_connective(const Sentence& sentence, std::size_t index,
                                  const ConnectiveLexicon& lexicon, const ParseTree* tree) {
  if (sentence.connectives) {
    for (const ConnectiveAnnotation& a : *sentence.connectives) {
      if (a.index == index) return {true, a.usage, a.sense, 1};
    }
    return {};
  }
  auto match = lexicon.match_at(sentence.tokens, index);
  if (!match) return {};
  std::optional<ParseTree> parsed;
  if (!tree) {
    if (!sentence.parse) throw MissingLayerError("?", "parse", "Disc-Conn");
    parsed = tree::parse_ptb(*sentence.parse);
    tree = &*parsed;
  }
  ConnectiveTag tag;
  tag.is_connective = true;
  tag.length = match->length;
  tag.usage = heuristic_usage(*tree, index, match->length);
  tag.sense = tag.usage == ConnectiveUsage::discourse ? match->sense : ConnectiveSense::none;
  return tag;
}

ConnectiveFeatures connective_features(const EssayDoc& doc, const ConnectiveLexicon& lexicon) {
  std::size_t non_discourse = 0;
  std::array<std::size_t, 5> senses{};  // indexed by ConnectiveSense
  auto count = [&](ConnectiveUsage usage, ConnectiveSense sense) {
    if (usage == ConnectiveUsage::discourse) {
      ++senses[static_cast<std::size_t>(sense)];
    } else {
      ++non_discourse;
    }
  };
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& s = doc.sentences[si];
    if (s.connectives) {
      for (const ConnectiveAnnotation& a : *s.connectives) count(a.usage, a.sense);
      continue;
    }
    std::optional<ParseTree> tree;
    for (std::size_t i = 0; i < s.tokens.size();) {
      auto match = lexicon.match_at(s.tokens, i);
      if (!match) {
        ++i;
        continue;
      }
      if (!tree) {
        if (!s.parse) {
          throw MissingLayerError(doc.id, "parse (sentence " + std::to_string(si) + ")",
                                  "Disc-Conn");
        }
        tree = tree::parse_ptb(*s.parse);
      }
      ConnectiveTag tag = classify_connective(s, i, lexicon, &*tree);
      count(tag.usage, tag.sense);
      i += tag.length;
    }
  }
  const std::size_t n = doc.sentences.size();
  ConnectiveFeatures f;
  f.expansion = ratio(senses[static_cast<std::size_t>(ConnectiveSense::expansion)], n);
  f.contingency = ratio(senses[static_cast<std::size_t>(ConnectiveSense::contingency)], n);
  f.comparison = ratio(senses[static_cast<std::size_t>(ConnectiveSense::comparison)], n);
  f.temporal = ratio(senses[static_cast<std::size_t>(ConnectiveSense::temporal)], n);
  f.discourse = f.expansion + f.contingency + f.comparison + f.temporal;
  f.non_discourse = ratio(non_discourse, n);
  f.all = f.discourse + f.non_discourse;
  return f;
}

EntityGrid build_entity_grid(std::span<const ParseTree> trees) {
  EntityGrid grid;
  grid.sentences = trees.size();
  std::map<std::string, std::vector<GridRole>> rows;
  for (std::size_t si = 0; si < trees.size(); ++si) {
    const ParseTree& t = trees[si];
    for (int id = 0; id < static_cast<int>(t.size()); ++id) {
      const auto& node = t.node(id);
      if (node.label != "NP") continue;
      int head = -1;
      for (int c : node.children) {
        if (t.is_terminal(c) && tags::is_noun(t.node(c).label)) head = c;
      }
      if (head < 0) continue;
      GridRole role = GridRole::other;
      if (node.parent >= 0) {
        const auto& parent = t.node(node.parent);
        const auto& sibs = parent.children;
        auto it = std::find(sibs.begin(), sibs.end(), id);
        const bool before_vp = it + 1 != sibs.end() && t.node(*(it + 1)).label == "VP";
        if (parent.label == "S" && before_vp) {
          role = GridRole::subject;
        } else if (parent.label == "VP") {
          role = GridRole::object;
        }
      }
      ++grid.mentions;
      grid.mention_words += tree::words_under(t, id);
      auto& row = rows[text::fold_case(t.node(head).word)];
      if (row.empty()) row.assign(trees.size(), GridRole::absent);
      // Keep the most salient role: S over O over X.
      if (static_cast<int>(role) < static_cast<int>(row[si])) row[si] = role;
    }
  }
  for (auto& [entity, row] : rows) {
    grid.entities.push_back(entity);
    grid.cells.push_back(std::move(row));
  }
  return grid;
}

EntityFeatures entity_features(const EntityGrid& grid) {
  EntityFeatures f;
  std::size_t total = 0;
  for (const auto& row : grid.cells) {
    for (std::size_t s = 0; s + 1 < row.size(); ++s) {
      ++f.transition_counts[static_cast<std::size_t>(row[s]) * kNumGridRoles +
                            static_cast<std::size_t>(row[s + 1])];
      ++total;
    }
  }
  for (std::size_t k = 0; k < f.transitions.size(); ++k) {
    f.transitions[k] = ratio(f.transition_counts[k], total);
  }
  f.entities_per_sentence = ratio(grid.mentions, grid.sentences);
  f.entities_per_text = static_cast<double>(grid.mentions);
  f.unique_entities = static_cast<double>(grid.entities.size());
  f.words_per_entity = ratio(grid.mention_words, grid.mentions);
  return f;
}

EntityFeatures entity_grid_features(const EssayDoc& doc) {
  return entity_features(build_entity_grid(tree::parse_sentences(doc, "Disc-Entities")));
}

ChainFeatures chain_features(const EssayDoc& doc) {
  ChainFeatures f;
  if (!doc.chains || doc.chains->empty()) return f;
  std::array<std::size_t, kNumMentionKinds> kinds{};
  std::size_t total = 0;
  for (const CorefChain& chain : *doc.chains) {
    for (const Mention& m : chain.mentions) {
      ++kinds[static_cast<std::size_t>(mention_kind(doc, m))];
      ++total;
    }
  }
  f.average_length = ratio(total, doc.chains->size());
  for (std::size_t k = 0; k < kinds.size(); ++k) f.proportions[k] = ratio(kinds[k], total);
  return f;
}

}  // namespace disc
}  // namespace aes
