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

#include "aes/synfeat.hpp"

#include "aes/annotate.hpp"

namespace aes::syn {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

SynProfile from_totals(const SyntacticCounts& c, std::size_t sentences) {
  SynProfile p;
  p.avg_sentence_length = ratio(c.words, sentences);
  p.mean_length_of_clauses = ratio(c.words, c.clauses);
  p.mean_length_of_tunits = ratio(c.words, c.t_units);
  p.complex_nominals_per_clause = ratio(c.complex_nominals, c.clauses);
  p.complex_nominals_per_tunit = ratio(c.complex_nominals, c.t_units);
  p.complex_tunit_ratio = ratio(c.complex_t_units, c.t_units);
  p.coordinate_phrases_per_clause = ratio(c.coordinate_phrases, c.clauses);
  p.coordinate_phrases_per_tunit = ratio(c.coordinate_phrases, c.t_units);
  p.dependent_clause_ratio = ratio(c.dependent_clauses, c.clauses);
  p.dependent_clauses_per_tunit = ratio(c.dependent_clauses, c.t_units);
  p.tunit_complexity_ratio = ratio(c.clauses, c.t_units);
  p.vp_per_tunit = ratio(c.verb_phrases, c.t_units);
  p.tunits_per_sentence = ratio(c.t_units, sentences);
  p.clauses_per_sentence = ratio(c.clauses, sentences);

  p.avg_parse_tree_height = ratio(c.height, sentences);
  p.num_sentences = static_cast<double>(sentences);
  p.constituents_per_sentence = ratio(c.constituents, sentences);
  p.conjp_per_sentence = ratio(c.conjoined_phrases, sentences);
  p.avg_np_size = ratio(c.np_words, c.noun_phrases);
  p.nps_per_sentence = ratio(c.noun_phrases, sentences);
  p.avg_pp_size = ratio(c.pp_words, c.prepositional_phrases);
  p.pps_per_sentence = ratio(c.prepositional_phrases, sentences);
  p.rrcs_per_sentence = ratio(c.reduced_relatives, sentences);
  p.sbars_per_sentence = ratio(c.sbars, sentences);
  p.subtrees_per_sentence = ratio(c.subtrees, sentences);
  p.avg_vp_size = ratio(c.vp_words, c.verb_phrases);
  p.vps_per_sentence = ratio(c.verb_phrases, sentences);
  p.wh_phrases_per_sentence = ratio(c.wh_phrases, sentences);
  return p;
}

SynProfile syntactic_complexity(std::span<const ParseTree> trees) {
  SyntacticCounts totals;
  for (const ParseTree& t : trees) totals += tree::syntactic_counts(t);
  return from_totals(totals, trees.size());
}

SynProfile syntactic_complexity(const EssayDoc& doc) {
  return syntactic_complexity(tree::parse_sentences(doc, "Syn"));
}

}  // namespace aes::syn
