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

#include "aes/treeops.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "aes/annotate.hpp"
#include "aes/errors.hpp"
#include "aes/tags.hpp"

namespace aes {

class TreeBuilder {
 public:
  static ParseTree build(std::vector<ParseTree::Node> nodes) {
    ParseTree t;
    t.nodes_ = std::move(nodes);
    const int n = static_cast<int>(t.nodes_.size());
    t.first_leaf_.assign(static_cast<std::size_t>(n), 0);
    t.leaf_span_.assign(static_cast<std::size_t>(n), 0);
    for (int id = 0; id < n; ++id) {
      if (t.nodes_[static_cast<std::size_t>(id)].children.empty()) t.leaves_.push_back(id);
      t.height_ = std::max(t.height_, t.nodes_[static_cast<std::size_t>(id)].depth);
    }
    // Preorder: leaves under a node are contiguous in leaves_.
    std::size_t li = 0;
    for (int id = 0; id < n; ++id) {
      while (li < t.leaves_.size() && t.leaves_[li] < id) ++li;
      t.first_leaf_[static_cast<std::size_t>(id)] = static_cast<int>(li);
      std::size_t hi = li;
      const int end = t.nodes_[static_cast<std::size_t>(id)].subtree_end;
      while (hi < t.leaves_.size() && t.leaves_[hi] < end) ++hi;
      t.leaf_span_[static_cast<std::size_t>(id)] = static_cast<int>(hi - li);
    }
    return t;
  }
};

std::span<const int> ParseTree::leaves_under(int id) const {
  const auto first = static_cast<std::size_t>(first_leaf_[static_cast<std::size_t>(id)]);
  const auto count = static_cast<std::size_t>(leaf_span_[static_cast<std::size_t>(id)]);
  return std::span<const int>(leaves_).subspan(first, count);
}

namespace {

void render_node(const ParseTree& t, int id, std::string& out) {
  const auto& n = t.node(id);
  out += '(';
  out += n.label;
  if (n.children.empty()) {
    out += ' ';
    out += n.word;
  } else {
    for (int c : n.children) {
      out += ' ';
      render_node(t, c, out);
    }
  }
  out += ')';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class BracketParser {
 public:
  explicit BracketParser(std::string_view s) : s_(s) {}

  ParseTree parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty bracket string at offset 0", 0);
    parse_node(-1, 1);
    skip();
    if (pos_ < s_.size()) fail("unexpected trailing input", pos_);
    return TreeBuilder::build(std::move(nodes_));
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) {
    throw ParseError(what + " at offset " + std::to_string(at), at);
  }

  void skip() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  std::string read_symbol() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && !is_space(s_[pos_]) && s_[pos_] != '(' && s_[pos_] != ')') ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  int parse_node(int parent, int depth) {
    const std::size_t open = pos_;
    if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '('", pos_);
    ++pos_;
    skip();
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_.back().parent = parent;
    nodes_.back().depth = depth;
    std::string label = read_symbol();
    if (label.empty() && parent != -1) fail("node without a label", open);
    skip();
    if (pos_ >= s_.size()) fail("unbalanced '('", open);
    if (s_[pos_] == ')') fail("node without children", open);
    if (s_[pos_] == '(') {
      std::vector<int> children;
      while (pos_ < s_.size() && s_[pos_] == '(') {
        children.push_back(parse_node(id, depth + 1));
        skip();
      }
      if (pos_ >= s_.size()) fail("unbalanced '('", open);
      if (s_[pos_] != ')') fail("word mixed with subtrees", pos_);
      nodes_[static_cast<std::size_t>(id)].children = std::move(children);
    } else {
      std::string word = read_symbol();
      skip();
      if (pos_ >= s_.size()) fail("unbalanced '('", open);
      if (s_[pos_] != ')') fail("terminal with more than one word", pos_);
      if (label.empty()) fail("terminal without a label", open);
      nodes_[static_cast<std::size_t>(id)].word = std::move(word);
    }
    ++pos_;  // ')'
    nodes_[static_cast<std::size_t>(id)].label = std::move(label);
    nodes_[static_cast<std::size_t>(id)].subtree_end = static_cast<int>(nodes_.size());
    return id;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<ParseTree::Node> nodes_;
};

}  // namespace

std::string ParseTree::render() const {
  std::string out;
  if (!nodes_.empty()) render_node(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Patterns

enum class RelOp { child, parent, descendant, ancestor, next_sister, prev_sister };

struct TreePattern::Node {
  bool wildcard = false;
  std::vector<std::string> labels;
  struct Relation {
    RelOp op;
    bool negated;
    std::shared_ptr<const Node> target;
  };
  std::vector<Relation> relations;
};

namespace {

class PatternParser {
 public:
  explicit PatternParser(std::string_view s) : s_(s) {}

  std::shared_ptr<const TreePattern::Node> parse() {
    auto n = parse_node();
    skip();
    if (pos_ < s_.size()) fail("unexpected trailing input", pos_);
    return n;
  }

 private:
  using PNode = TreePattern::Node;

  [[noreturn]] void fail(const std::string& what, std::size_t at) {
    throw ParseError("pattern: " + what + " at offset " + std::to_string(at), at);
  }
  void skip() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }
  static bool label_char(char c) {
    return !is_space(c) && c != '(' && c != ')' && c != '<' && c != '>' && c != '!' && c != '|';
  }

  std::shared_ptr<PNode> parse_node() {
    skip();
    std::shared_ptr<PNode> node;
    if (pos_ < s_.size() && s_[pos_] == '(') {
      const std::size_t open = pos_++;
      auto inner = parse_node();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("unbalanced '('", open);
      ++pos_;
      node = std::make_shared<PNode>(*inner);
    } else {
      node = parse_labels();
    }
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char c = s_[pos_];
      const bool op_start = c == '!' || c == '<' || c == '>' ||
                            (c == '$' && pos_ + 1 < s_.size() &&
                             (s_[pos_ + 1] == '.' || s_[pos_ + 1] == ','));
      if (!op_start) break;
      node->relations.push_back(parse_relation());
    }
    return node;
  }

  std::shared_ptr<PNode> parse_labels() {
    auto node = std::make_shared<PNode>();
    if (s_.substr(pos_, 2) == "__" &&
        (pos_ + 2 >= s_.size() || !label_char(s_[pos_ + 2]))) {
      pos_ += 2;
      node->wildcard = true;
      return node;
    }
    while (true) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && label_char(s_[pos_])) ++pos_;
      if (pos_ == start) fail("expected a label", start);
      node->labels.emplace_back(s_.substr(start, pos_ - start));
      if (pos_ < s_.size() && s_[pos_] == '|') {
        ++pos_;
        continue;
      }
      break;
    }
    return node;
  }

  PNode::Relation parse_relation() {
    bool negated = false;
    if (s_[pos_] == '!') {
      negated = true;
      ++pos_;
    }
    RelOp op;
    const std::string_view rest = s_.substr(pos_);
    if (rest.starts_with("<<")) {
      op = RelOp::descendant;
      pos_ += 2;
    } else if (rest.starts_with(">>")) {
      op = RelOp::ancestor;
      pos_ += 2;
    } else if (rest.starts_with("<")) {
      op = RelOp::child;
      pos_ += 1;
    } else if (rest.starts_with(">")) {
      op = RelOp::parent;
      pos_ += 1;
    } else if (rest.starts_with("$.")) {
      op = RelOp::next_sister;
      pos_ += 2;
    } else if (rest.starts_with("$,")) {
      op = RelOp::prev_sister;
      pos_ += 2;
    } else {
      fail("expected a relation operator", pos_);
    }
    skip();
    if (pos_ >= s_.size()) fail("relation without a target", pos_);
    std::shared_ptr<const PNode> target;
    if (s_[pos_] == '(') {
      const std::size_t open = pos_++;
      target = parse_node();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("unbalanced '('", open);
      ++pos_;
    } else {
      target = parse_labels();
    }
    return {op, negated, std::move(target)};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool label_matches(const TreePattern::Node& p, const std::string& label) {
  if (p.wildcard) return true;
  return std::find(p.labels.begin(), p.labels.end(), label) != p.labels.end();
}

bool match_node(const ParseTree& t, int id, const TreePattern::Node& p);

bool related_exists(const ParseTree& t, int id, RelOp op, const TreePattern::Node& target) {
  const auto& n = t.node(id);
  switch (op) {
    case RelOp::child:
      for (int c : n.children) {
        if (match_node(t, c, target)) return true;
      }
      return false;
    case RelOp::parent:
      return n.parent >= 0 && match_node(t, n.parent, target);
    case RelOp::descendant:
      for (int d = id + 1; d < n.subtree_end; ++d) {
        if (match_node(t, d, target)) return true;
      }
      return false;
    case RelOp::ancestor:
      for (int a = n.parent; a >= 0; a = t.node(a).parent) {
        if (match_node(t, a, target)) return true;
      }
      return false;
    case RelOp::next_sister:
    case RelOp::prev_sister: {
      if (n.parent < 0) return false;
      const auto& sibs = t.node(n.parent).children;
      auto it = std::find(sibs.begin(), sibs.end(), id);
      if (op == RelOp::next_sister) {
        return it + 1 != sibs.end() && match_node(t, *(it + 1), target);
      }
      return it != sibs.begin() && match_node(t, *(it - 1), target);
    }
  }
  return false;
}

bool match_node(const ParseTree& t, int id, const TreePattern::Node& p) {
  if (!label_matches(p, t.node(id).label)) return false;
  for (const auto& rel : p.relations) {
    if (related_exists(t, id, rel.op, *rel.target) == rel.negated) return false;
  }
  return true;
}

}  // namespace

TreePattern::TreePattern(std::string_view text)
    : text_(text), root_(PatternParser(text).parse()) {}

bool TreePattern::matches(const ParseTree& tree, int node) const {
  return root_ && match_node(tree, node, *root_);
}

namespace tree {

ParseTree parse_ptb(std::string_view bracket) { return BracketParser(bracket).parse(); }

std::vector<ParseTree> parse_sentences(const EssayDoc& doc, const std::string& group) {
  std::vector<ParseTree> trees;
  trees.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Sentence& s = doc.sentences[i];
    if (!s.parse) {
      throw MissingLayerError(doc.id, "parse (sentence " + std::to_string(i) + ")", group);
    }
    trees.push_back(parse_ptb(*s.parse));
  }
  return trees;
}

TreePattern compile(std::string_view pattern) { return TreePattern(pattern); }

std::vector<int> match_nodes(const ParseTree& tree, const TreePattern& pattern) {
  std::vector<int> out;
  for (int id = 0; id < static_cast<int>(tree.size()); ++id) {
    if (pattern.matches(tree, id)) out.push_back(id);
  }
  return out;
}

std::size_t match_count(const ParseTree& tree, const TreePattern& pattern) {
  std::size_t n = 0;
  for (int id = 0; id < static_cast<int>(tree.size()); ++id) {
    if (pattern.matches(tree, id)) ++n;
  }
  return n;
}

std::size_t match_count(const ParseTree& tree, std::string_view pattern) {
  return match_count(tree, TreePattern(pattern));
}

std::size_t words_under(const ParseTree& tree, int id) {
  std::size_t n = 0;
  for (int leaf : tree.leaves_under(id)) {
    if (tags::is_word(tree.node(leaf).label)) ++n;
  }
  return n;
}

namespace {

struct SyntaxPatterns {
  TreePattern clause_direct{"S|SINV|SQ < (VP < VBD|VBP|VBZ|MD)"};
  TreePattern clause_nested{"S|SINV|SQ < (VP < (VP < VBD|VBP|VBZ|MD))"};
  TreePattern under_sbar{"__ >> SBAR"};
  TreePattern coordinate{"ADJP|ADVP|NP|VP < CC"};
  TreePattern cn_modified{"NP !> NP << JJ|JJR|JJS|POS|PP|SBAR|S|VBG|VBN"};
  TreePattern cn_appositive{"NP !> NP < (NP $. (, $. NP))"};
  TreePattern cn_clause_complement{"SBAR > VP"};
  TreePattern cn_clause_subject{"SBAR $. VP"};
  TreePattern cn_gerund_subject{"S $. VP < (VP < VBG|TO)"};
  TreePattern wh{"WHNP|WHPP|WHADJP|WHADVP"};
};

const SyntaxPatterns& patterns() {
  static const SyntaxPatterns p;
  return p;
}

bool is_clause(const ParseTree& t, int id) {
  const auto& p = patterns();
  return p.clause_direct.matches(t, id) || p.clause_nested.matches(t, id);
}

bool sentence_level(const std::string& label) {
  return label.empty() || label == "ROOT" || label == "S" || label == "SINV" || label == "SQ";
}

bool is_t_unit(const ParseTree& t, int id) {
  for (int a = t.node(id).parent; a >= 0; a = t.node(a).parent) {
    if (!sentence_level(t.node(a).label)) return false;
  }
  return true;
}

}  // namespace

std::vector<int> clause_nodes(const ParseTree& tree) {
  std::vector<int> out;
  for (int id = 0; id < static_cast<int>(tree.size()); ++id) {
    if (is_clause(tree, id)) out.push_back(id);
  }
  return out;
}

std::vector<int> t_unit_nodes(const ParseTree& tree) {
  std::vector<int> out;
  for (int id : clause_nodes(tree)) {
    if (is_t_unit(tree, id)) out.push_back(id);
  }
  return out;
}

SyntacticCounts syntactic_counts(const ParseTree& t) {
  const auto& p = patterns();
  SyntacticCounts c;
  const int n = static_cast<int>(t.size());
  c.subtrees = t.size();
  c.height = static_cast<std::size_t>(t.height());
  for (int leaf : t.leaves()) {
    if (tags::is_word(t.node(leaf).label)) ++c.words;
  }

  std::vector<int> clauses = clause_nodes(t);
  std::vector<int> dependents;
  std::vector<int> t_units;
  for (int id : clauses) {
    if (p.under_sbar.matches(t, id)) dependents.push_back(id);
    if (is_t_unit(t, id)) t_units.push_back(id);
  }
  c.clauses = clauses.size();
  c.dependent_clauses = dependents.size();
  c.t_units = t_units.size();
  for (int tu : t_units) {
    if (std::any_of(dependents.begin(), dependents.end(),
                    [&](int d) { return t.dominates(tu, d); })) {
      ++c.complex_t_units;
    }
  }

  for (int id = 0; id < n; ++id) {
    const std::string& label = t.node(id).label;
    if (!t.is_terminal(id)) ++c.constituents;
    if (p.coordinate.matches(t, id)) ++c.coordinate_phrases;
    if (p.cn_modified.matches(t, id) || p.cn_appositive.matches(t, id) ||
        p.cn_clause_complement.matches(t, id) || p.cn_clause_subject.matches(t, id) ||
        p.cn_gerund_subject.matches(t, id)) {
      ++c.complex_nominals;
    }
    if (p.wh.matches(t, id)) ++c.wh_phrases;
    if (label == "NP") {
      ++c.noun_phrases;
      c.np_words += words_under(t, id);
    } else if (label == "VP") {
      ++c.verb_phrases;
      c.vp_words += words_under(t, id);
    } else if (label == "PP") {
      ++c.prepositional_phrases;
      c.pp_words += words_under(t, id);
    } else if (label == "SBAR") {
      ++c.sbars;
    } else if (label == "RRC") {
      ++c.reduced_relatives;
    } else if (label == "CONJP") {
      ++c.conjoined_phrases;
    }
  }
  return c;
}

}  // namespace tree

SyntacticCounts& SyntacticCounts::operator+=(const SyntacticCounts& o) {
  words += o.words;
  clauses += o.clauses;
  t_units += o.t_units;
  complex_t_units += o.complex_t_units;
  dependent_clauses += o.dependent_clauses;
  coordinate_phrases += o.coordinate_phrases;
  complex_nominals += o.complex_nominals;
  verb_phrases += o.verb_phrases;
  noun_phrases += o.noun_phrases;
  prepositional_phrases += o.prepositional_phrases;
  sbars += o.sbars;
  reduced_relatives += o.reduced_relatives;
  conjoined_phrases += o.conjoined_phrases;
  wh_phrases += o.wh_phrases;
  constituents += o.constituents;
  subtrees += o.subtrees;
  height += o.height;
  np_words += o.np_words;
  vp_words += o.vp_words;
  pp_words += o.pp_words;
  return *this;
}

}  // namespace aes
