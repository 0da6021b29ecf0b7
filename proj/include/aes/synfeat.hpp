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

#include <span>

#include "aes/treeops.hpp"

namespace aes {

struct EssayDoc;

struct SynProfile {
  // Second-language complexity measures.
  double avg_sentence_length = 0;
  double mean_length_of_clauses = 0;
  double mean_length_of_tunits = 0;
  double complex_nominals_per_clause = 0;
  double complex_nominals_per_tunit = 0;
  double complex_tunit_ratio = 0;
  double coordinate_phrases_per_clause = 0;
  double coordinate_phrases_per_tunit = 0;
  double dependent_clause_ratio = 0;
  double dependent_clauses_per_tunit = 0;
  double tunit_complexity_ratio = 0;
  double vp_per_tunit = 0;
  double tunits_per_sentence = 0;
  double clauses_per_sentence = 0;
  // Phrase counts, sizes and tree shape.
  double avg_parse_tree_height = 0;
  double num_sentences = 0;
  double constituents_per_sentence = 0;
  double conjp_per_sentence = 0;
  double avg_np_size = 0;
  double nps_per_sentence = 0;
  double avg_pp_size = 0;
  double pps_per_sentence = 0;
  double rrcs_per_sentence = 0;
  double sbars_per_sentence = 0;
  double subtrees_per_sentence = 0;
  double avg_vp_size = 0;
  double vps_per_sentence = 0;
  double wh_phrases_per_sentence = 0;
};

namespace syn {

// Ratios of document totals; a zero denominator yields 0.
SynProfile syntactic_complexity(std::span<const ParseTree> trees);

// Throws MissingLayerError when any sentence lacks a parse.
SynProfile syntactic_complexity(const EssayDoc& doc);

SynProfile from_totals(const SyntacticCounts& totals, std::size_t sentences);

}  // namespace syn
}  // namespace aes
