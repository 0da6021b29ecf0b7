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

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aes {

struct EssayDoc;

// Rooted ordered labeled tree read from a PTB bracket string. Nodes are
// stored in preorder; node 0 is the root. A terminal is a preterminal node
// carrying its word, so "(NN cat)" is one node with label NN and word "cat".
class ParseTree {
 public:
  struct Node {
    std::string label;
    std::string word;  // non-empty only for terminals
    int parent = -1;
    std::vector<int> children;
    int subtree_end = 0;  // one past the last preorder index in this subtree
    int depth = 1;        // root has depth 1
  };

  ParseTree() = default;

  std::size_t size() const { return nodes_.size(); }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  bool is_terminal(int id) const { return node(id).children.empty(); }

  // Terminal node ids in left-to-right order (aligned with sentence tokens).
  const std::vector<int>& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }

  // Nodes on the longest root-to-leaf path, root counted as 1.
  int height() const { return height_; }

  // Proper dominance: `ancestor` is a strict ancestor of `descendant`.
  bool dominates(int ancestor, int descendant) const {
    return descendant > ancestor && descendant < node(ancestor).subtree_end;
  }

  // Terminal ids dominated by (or equal to) `id`.
  std::span<const int> leaves_under(int id) const;

  // Canonical rendering: single spaces, no extra whitespace.
  std::string render() const;

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
  std::vector<int> leaves_;
  std::vector<int> first_leaf_;  // per node, index into leaves_
  std::vector<int> leaf_span_;   // per node, number of leaves
  int height_ = 0;
};

// Tregex-subset pattern.
//
//   pattern  := node
//   node     := '(' node ')' | labels relation*
//   labels   := '__' | LABEL ('|' LABEL)*
//   relation := ['!'] OP target
//   target   := '(' node ')' | labels
//   OP       := '<'  child            '>'  parent
//               '<<' descendant       '>>' ancestor
//               '$.' next sister      '$,' previous sister
//
// Relations listed after a node all constrain that node (A < B < C means A
// has a child B and a child C); parentheses nest a relation on the target.
class TreePattern {
 public:
  struct Node;
  TreePattern() = default;
  // Throws ParseError with the 0-based offset of the problem.
  explicit TreePattern(std::string_view text);

  bool matches(const ParseTree& tree, int node) const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

namespace tree {

// Throws ParseError carrying the 0-based character offset of the problem.
ParseTree parse_ptb(std::string_view bracket);

// Parses every sentence of the essay; throws MissingLayerError naming
// `group` when a sentence has no parse.
std::vector<ParseTree> parse_sentences(const EssayDoc& doc, const std::string& group);

TreePattern compile(std::string_view pattern);

std::vector<int> match_nodes(const ParseTree& tree, const TreePattern& pattern);
std::size_t match_count(const ParseTree& tree, const TreePattern& pattern);
std::size_t match_count(const ParseTree& tree, std::string_view pattern);

// Word tokens (non-punctuation terminals) dominated by `id`.
std::size_t words_under(const ParseTree& tree, int id);

}  // namespace tree

// Per-sentence raw counts behind the syntactic-complexity features.
//
//   clause            S|SINV|SQ < (VP < VBD|VBP|VBZ|MD), or the same through
//                     one nested VP (coordinated verb phrases)
//   T-unit            clause whose proper ancestors are all ROOT or S|SINV|SQ
//                     (main clauses and coordinated main clauses)
//   dependent clause  clause >> SBAR
//   complex T-unit    T-unit dominating a dependent clause
//   coordinate phrase ADJP|ADVP|NP|VP < CC
//   complex nominal   NP !> NP << JJ|JJR|JJS|POS|PP|SBAR|S|VBG|VBN
//                     NP !> NP < (NP $. (, $. NP))      appositive
//                     SBAR > VP,  SBAR $. VP            nominal clause
//                     S $. VP < (VP < VBG|TO)           gerund/infinitive subject
//
// NP/VP/PP/SBAR/RRC/CONJP/WH* counts are plain label counts; sizes are word
// tokens dominated by those nodes.
struct SyntacticCounts {
  std::size_t words = 0;
  std::size_t clauses = 0;
  std::size_t t_units = 0;
  std::size_t complex_t_units = 0;
  std::size_t dependent_clauses = 0;
  std::size_t coordinate_phrases = 0;
  std::size_t complex_nominals = 0;
  std::size_t verb_phrases = 0;
  std::size_t noun_phrases = 0;
  std::size_t prepositional_phrases = 0;
  std::size_t sbars = 0;
  std::size_t reduced_relatives = 0;
  std::size_t conjoined_phrases = 0;
  std::size_t wh_phrases = 0;
  std::size_t constituents = 0;
  std::size_t subtrees = 0;
  std::size_t height = 0;
  std::size_t np_words = 0;
  std::size_t vp_words = 0;
  std::size_t pp_words = 0;

  SyntacticCounts& operator+=(const SyntacticCounts& o);
  bool operator==(const SyntacticCounts&) const = default;
};

namespace tree {

SyntacticCounts syntactic_counts(const ParseTree& tree);

// Node-id sets behind the clause/T-unit counts, exposed for tests.
std::vector<int> clause_nodes(const ParseTree& tree);
std::vector<int> t_unit_nodes(const ParseTree& tree);

}  // namespace tree
}  // namespace aes
