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

#include "aes/vector.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>

#include "aes/discfeat.hpp"
#include "aes/errfeat.hpp"
#include "aes/errors.hpp"
#include "aes/lexfeat.hpp"
#include "aes/posfeat.hpp"
#include "aes/synfeat.hpp"

namespace aes {
namespace {

using G = FeatureGroup;

constexpr FeatureInfo kCatalog[] = {
    {"docLen", G::doc_len, false, "word tokens in the essay"},

    {"WORD_TTR", G::word, false, "types / tokens"},
    {"WORD_CorrectedTTR", G::word, false, "types / sqrt(2 tokens)"},
    {"WORD_RootTTR", G::word, false, "types / sqrt(tokens)"},
    {"WORD_BilogTTR", G::word, false, "log types / log tokens"},
    {"WORD_MTLD", G::word, false, "bidirectional MTLD, threshold 0.72"},

    {"POS_numNouns", G::pos, false, ""},
    {"POS_numProperNouns", G::pos, false, ""},
    {"POS_numPronouns", G::pos, false, ""},
    {"POS_numPerPronouns", G::pos, false, ""},
    {"POS_numAdjectives", G::pos, false, ""},
    {"POS_numAdverbs", G::pos, false, ""},
    {"POS_numConjunctions", G::pos, false, ""},
    {"POS_numInterjections", G::pos, false, ""},
    {"POS_numDeterminers", G::pos, false, ""},
    {"POS_numPrepositions", G::pos, false, ""},
    {"POS_numVerbs", G::pos, false, ""},
    {"POS_numWhPronouns", G::pos, false, ""},
    {"POS_numVerbsVBD", G::pos, false, ""},
    {"POS_numVerbsVBG", G::pos, false, ""},
    {"POS_numVerbsVBN", G::pos, false, ""},
    {"POS_numVerbsVBP", G::pos, false, ""},
    {"POS_numVerbsVBZ", G::pos, false, ""},
    {"POS_numModalVerbs", G::pos, false, ""},
    {"POS_adjectiveVariation", G::pos, false, ""},
    {"POS_adverbVariation", G::pos, false, ""},
    {"POS_correctedVerbVariation1", G::pos, false, ""},
    {"POS_modifierVariation", G::pos, false, ""},
    {"POS_nounVar", G::pos, false, ""},
    {"POS_squaredVerbVar1", G::pos, false, ""},
    {"POS_verbVar1", G::pos, false, ""},
    {"POS_verbVar2", G::pos, false, ""},
    {"POS_numLexicalWords", G::pos, false, ""},

    {"SYN_avgSentenceLength", G::syn, false, ""},
    {"SYN_MeanLengthofClauses", G::syn, false, ""},
    {"SYN_MeanLengthofTunits", G::syn, false, ""},
    {"SYN_ComplexNominalsPerClause", G::syn, false, ""},
    {"SYN_CNPerTunit", G::syn, false, ""},
    {"SYN_ComplexTunitRatio", G::syn, false, ""},
    {"SYN_CoordinatePhrasesPerClause", G::syn, false, ""},
    {"SYN_CoordPerTunit", G::syn, false, ""},
    {"SYN_DependentClauseRatio", G::syn, false, ""},
    {"SYN_DependentClausesPerTunit", G::syn, false, ""},
    {"SYN_TunitComplexityRatio", G::syn, false, ""},
    {"SYN_VPPerTunit", G::syn, false, ""},
    {"SYN_numTunitsPerSen", G::syn, false, ""},
    {"SYN_numClausesPerSen", G::syn, false, ""},
    {"SYN_avgParseTreeHeightPerSen", G::syn, false, ""},
    {"SYN_numSentences", G::syn, false, ""},
    {"SYN_numConstitutentsPerSen", G::syn, false, "name spelled as published"},
    {"SYN_numConjPPerSen", G::syn, false, ""},
    {"SYN_avgNPSize", G::syn, false, ""},
    {"SYN_numNPsPerSen", G::syn, false, ""},
    {"SYN_numPPSize", G::syn, false, "average PP size in words"},
    {"SYN_numPPsPerSen", G::syn, false, ""},
    {"SYN_numRRCsPerSen", G::syn, false, ""},
    {"SYN_numSBARsPerSen", G::syn, false, ""},
    {"SYN_numSubtreesPerSen", G::syn, false, ""},
    {"SYN_numVPSize", G::syn, false, "average VP size in words"},
    {"SYN_numVPsPerSen", G::syn, false, ""},
    {"SYN_WhPhrasesPerSen", G::syn, false, ""},

    {"DISC_localContentWordOverlap", G::disc_overlap, false, ""},
    {"DISC_globalContentWordOverlap", G::disc_overlap, false, ""},
    {"DISC_localNounOverlap", G::disc_overlap, false, ""},
    {"DISC_globalNounOverlap", G::disc_overlap, false, ""},
    {"DISC_localStemOverlap", G::disc_overlap, false, ""},
    {"DISC_globalStemOverlap", G::disc_overlap, false, ""},
    {"DISC_localArgumentOverlap", G::disc_overlap, false, ""},
    {"DISC_globalArgumentOverlap", G::disc_overlap, false, ""},

    {"DISC_defArticlesPerWord", G::disc_refex, false, ""},
    {"DISC_defArticlesPerSen", G::disc_refex, false, ""},
    {"DISC_pronounsPerWord", G::disc_refex, false, ""},
    {"DISC_pronounsPerSen", G::disc_refex, false, ""},
    {"DISC_perPronounsPerWord", G::disc_refex, false, ""},
    {"DISC_perPronounsPerSen", G::disc_refex, false, ""},
    {"DISC_possPronounsPerWord", G::disc_refex, false, ""},
    {"DISC_possPronounsPerSen", G::disc_refex, false, ""},
    {"DISC_pronounsPerNoun", G::disc_refex, false, ""},
    {"DISC_properNounsPerNoun", G::disc_refex, false, ""},

    {"DISC_discConnectivesPerSen", G::disc_conn, false, ""},
    {"DISC_nonDiscConnectivesPerSen", G::disc_conn, false, ""},
    {"DISC_allConnectivesPerSen", G::disc_conn, false, ""},
    {"DISC_expansionPerSen", G::disc_conn, false, ""},
    {"DISC_contingencyPerSen", G::disc_conn, false, ""},
    {"DISC_comparisonPerSen", G::disc_conn, false, ""},
    {"DISC_temporalPerSen", G::disc_conn, false, ""},

    {"DISC_entTrans_SS", G::disc_entities, false, ""},
    {"DISC_entTrans_SO", G::disc_entities, false, ""},
    {"DISC_entTrans_SX", G::disc_entities, false, ""},
    {"DISC_entTrans_SN", G::disc_entities, false, "N is the absent role"},
    {"DISC_entTrans_OS", G::disc_entities, false, ""},
    {"DISC_entTrans_OO", G::disc_entities, false, ""},
    {"DISC_entTrans_OX", G::disc_entities, false, ""},
    {"DISC_entTrans_ON", G::disc_entities, false, ""},
    {"DISC_entTrans_XS", G::disc_entities, false, ""},
    {"DISC_entTrans_XO", G::disc_entities, false, ""},
    {"DISC_entTrans_XX", G::disc_entities, false, ""},
    {"DISC_entTrans_XN", G::disc_entities, false, ""},
    {"DISC_entTrans_NS", G::disc_entities, false, ""},
    {"DISC_entTrans_NO", G::disc_entities, false, ""},
    {"DISC_entTrans_NX", G::disc_entities, false, ""},
    {"DISC_entTrans_NN", G::disc_entities, false, ""},
    {"DISC_entitiesPerSen", G::disc_entities, true, ""},
    {"DISC_entitiesPerText", G::disc_entities, true, ""},
    {"DISC_uniqueEntitiesPerText", G::disc_entities, true, ""},
    {"DISC_wordsPerEntity", G::disc_entities, true, ""},

    {"DISC_avgChainLength", G::disc_chains, true, ""},
    {"DISC_chainPersonalPronouns", G::disc_chains, false, ""},
    {"DISC_chainDemonstrativePronouns", G::disc_chains, false, ""},
    {"DISC_chainReflexivePronouns", G::disc_chains, false, ""},
    {"DISC_chainProperNouns", G::disc_chains, false, ""},
    {"DISC_chainPossessiveDeterminers", G::disc_chains, false, ""},
    {"DISC_chainDemonstrativeDeterminers", G::disc_chains, false, ""},
    {"DISC_chainIndefiniteNPs", G::disc_chains, false, ""},
    {"DISC_chainDefiniteNPs", G::disc_chains, false, ""},

    {"ERR_spellingPerSen", G::error, false, ""},
    {"ERR_nonSpellingPerSen", G::error, false, ""},
    {"ERR_allErrorsPerSen", G::error, false, ""},
    {"ERR_spellingShare", G::error, false, "spelling errors / all errors"},
};

constexpr std::size_t kCatalogSize = std::size(kCatalog);

std::size_t catalog_index(std::string_view name) {
  for (std::size_t i = 0; i < kCatalogSize; ++i) {
    if (kCatalog[i].name == name) return i;
  }
  throw ConfigError("unknown feature '" + std::string(name) + "'");
}

std::vector<std::string> names_of(std::initializer_list<G> groups, bool extended) {
  std::vector<std::string> out;
  for (const FeatureInfo& f : kCatalog) {
    if (f.extended_only && !extended) continue;
    if (std::find(groups.begin(), groups.end(), f.group) != groups.end()) {
      out.emplace_back(f.name);
    }
  }
  return out;
}

std::optional<FeatureProfile> base_profile(std::string_view name) {
  const std::initializer_list<G> kAll = {G::doc_len,       G::word,        G::pos,
                                             G::syn,           G::disc_overlap, G::disc_refex,
                                             G::disc_conn,     G::disc_entities, G::disc_chains,
                                             G::error};
  FeatureProfile p;
  p.name = std::string(name);
  if (name == "docLen") p.features = names_of({G::doc_len}, false);
  else if (name == "Word") p.features = names_of({G::word}, false);
  else if (name == "POS") p.features = names_of({G::pos}, false);
  else if (name == "Syn") p.features = names_of({G::syn}, false);
  else if (name == "Disc-All")
    p.features = names_of({G::disc_overlap, G::disc_refex, G::disc_conn, G::disc_entities,
                           G::disc_chains},
                          false);
  else if (name == "Disc-Overlap") p.features = names_of({G::disc_overlap}, false);
  else if (name == "Disc-RefEx") p.features = names_of({G::disc_refex}, false);
  else if (name == "Disc-Conn") p.features = names_of({G::disc_conn}, false);
  else if (name == "Disc-Entities") p.features = names_of({G::disc_entities}, false);
  else if (name == "Disc-Chains") p.features = names_of({G::disc_chains}, false);
  else if (name == "Error") p.features = names_of({G::error}, false);
  else if (name == "paper-114" || name == "All") p.features = names_of(kAll, false);
  else if (name == "extended") p.features = names_of(kAll, true);
  else return std::nullopt;
  return p;
}

constexpr std::string_view kBaseNames[] = {
    "docLen",        "Word",         "POS",        "Syn",       "Disc-All",
    "Disc-Overlap",  "Disc-RefEx",   "Disc-Conn",  "Disc-Entities",
    "Disc-Chains",   "Error",        "paper-114",  "All",       "extended",
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Values for every catalog entry of the requested groups; nullopt marks an
// undefined value that will be imputed.
using Slots = std::array<std::optional<double>, kCatalogSize>;

void put(Slots& slots, std::size_t& at, std::optional<double> v) { slots[at++] = v; }

std::size_t first_of(G group) {
  for (std::size_t i = 0; i < kCatalogSize; ++i) {
    if (kCatalog[i].group == group) return i;
  }
  return kCatalogSize;
}

void fill_all_undefined(Slots& slots, G group) {
  for (std::size_t i = 0; i < kCatalogSize; ++i) {
    if (kCatalog[i].group == group) slots[i].reset();
  }
}

}  // namespace

std::string_view group_name(FeatureGroup g) {
  switch (g) {
    case G::doc_len: return "docLen";
    case G::word: return "Word";
    case G::pos: return "POS";
    case G::syn: return "Syn";
    case G::disc_overlap: return "Disc-Overlap";
    case G::disc_refex: return "Disc-RefEx";
    case G::disc_conn: return "Disc-Conn";
    case G::disc_entities: return "Disc-Entities";
    case G::disc_chains: return "Disc-Chains";
    case G::error: return "Error";
  }
  return "?";
}

std::span<const FeatureInfo> feature_catalog() { return kCatalog; }

const FeatureInfo* find_feature(std::string_view name) {
  for (const FeatureInfo& f : kCatalog) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::set<FeatureGroup> FeatureProfile::groups() const {
  std::set<FeatureGroup> out;
  for (const std::string& n : features) {
    if (const FeatureInfo* f = find_feature(n)) out.insert(f->group);
  }
  return out;
}

void FeatureProfile::check() const {
  std::set<std::string> seen;
  for (const std::string& n : features) {
    if (!find_feature(n)) throw ConfigError("profile '" + name + "': unknown feature '" + n + "'");
    if (!seen.insert(n).second) {
      throw ConfigError("profile '" + name + "': duplicate feature '" + n + "'");
    }
  }
}

FeatureProfile builtin_profile(std::string_view name) {
  bool prompt = true, l1 = true;
  std::string_view base = name;
  if (ends_with(name, "-noPromptL1")) {
    base = name.substr(0, name.size() - 11);
    prompt = l1 = false;
  } else if (ends_with(name, "-noPrompt")) {
    base = name.substr(0, name.size() - 9);
    prompt = false;
  }
  auto p = base_profile(base);
  if (!p) throw ConfigError("unknown profile '" + std::string(name) + "'");
  p->name = std::string(name);
  p->include_prompt = prompt;
  p->include_l1 = l1;
  return *p;
}

std::vector<std::string> builtin_profile_names() {
  std::vector<std::string> out;
  for (std::string_view b : kBaseNames) {
    out.emplace_back(b);
    out.push_back(std::string(b) + "-noPrompt");
    out.push_back(std::string(b) + "-noPromptL1");
  }
  return out;
}

nlohmann::json profile_to_json(const FeatureProfile& p) {
  return {{"name", p.name},
          {"features", p.features},
          {"include_prompt", p.include_prompt},
          {"include_l1", p.include_l1}};
}

FeatureProfile profile_from_json(const nlohmann::json& j) {
  FeatureProfile p;
  try {
    p.name = j.at("name").get<std::string>();
    p.features = j.at("features").get<std::vector<std::string>>();
    p.include_prompt = j.at("include_prompt").get<bool>();
    p.include_l1 = j.at("include_l1").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed profile: ") + e.what());
  }
  p.check();
  return p;
}

Matrix FeatureMatrix::numeric() const {
  Matrix m(rows.size(), profile.features.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].values.begin(), rows[r].values.end(), m.row(r).begin());
  }
  return m;
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> indices) const {
  FeatureMatrix out{profile, {}};
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) out.rows.push_back(rows.at(i));
  return out;
}

void FeatureExtractor::check_resources(const FeatureProfile& profile) const {
  profile.check();
  if (profile.groups().count(G::disc_conn) && !resources_.connectives) {
    throw ConfigError("profile '" + profile.name +
                      "' includes Disc-Conn features and needs a connective lexicon (--connectives)");
  }
}

FeatureVector FeatureExtractor::assemble(const EssayDoc& doc, const FeatureProfile& profile) const {
  check_resources(profile);
  const std::set<FeatureGroup> groups = profile.groups();
  Slots slots;

  auto guarded = [&](G group, auto&& body) {
    try {
      body();
    } catch (const UndefinedInputError&) {
      fill_all_undefined(slots, group);
    }
  };

  if (groups.count(G::doc_len)) {
    slots[first_of(G::doc_len)] = static_cast<double>(lex::word_forms(doc).size());
  }
  if (groups.count(G::word)) {
    guarded(G::word, [&] {
      const LexicalProfile lp = lex::lexical_profile(doc);
      std::size_t at = first_of(G::word);
      put(slots, at, lp.ttr.ttr);
      put(slots, at, lp.ttr.corrected_ttr);
      put(slots, at, lp.ttr.root_ttr);
      put(slots, at, lp.ttr.bilog_ttr);
      put(slots, at, lp.mtld);
    });
  }
  if (groups.count(G::pos)) {
    guarded(G::pos, [&] {
      const PosDensities d = pos::pos_density(doc);
      const LexicalVariation v = pos::lexical_variation(doc);
      std::size_t at = first_of(G::pos);
      for (double x : {d.nouns, d.proper_nouns, d.pronouns, d.personal_pronouns, d.adjectives,
                       d.adverbs, d.conjunctions, d.interjections, d.determiners,
                       d.prepositions, d.verbs, d.wh_pronouns, d.vbd, d.vbg, d.vbn, d.vbp,
                       d.vbz, d.modals, v.adjective_variation, v.adverb_variation,
                       v.corrected_verb_variation1, v.modifier_variation, v.noun_variation,
                       v.squared_verb_variation1, v.verb_variation1, v.verb_variation2,
                       v.lexical_words}) {
        put(slots, at, x);
      }
    });
  }
  if (groups.count(G::syn)) {
    const SynProfile s = syn::syntactic_complexity(doc);
    std::size_t at = first_of(G::syn);
    for (double x : {s.avg_sentence_length, s.mean_length_of_clauses, s.mean_length_of_tunits,
                     s.complex_nominals_per_clause, s.complex_nominals_per_tunit,
                     s.complex_tunit_ratio, s.coordinate_phrases_per_clause,
                     s.coordinate_phrases_per_tunit, s.dependent_clause_ratio,
                     s.dependent_clauses_per_tunit, s.tunit_complexity_ratio, s.vp_per_tunit,
                     s.tunits_per_sentence, s.clauses_per_sentence, s.avg_parse_tree_height,
                     s.num_sentences, s.constituents_per_sentence, s.conjp_per_sentence,
                     s.avg_np_size, s.nps_per_sentence, s.avg_pp_size, s.pps_per_sentence,
                     s.rrcs_per_sentence, s.sbars_per_sentence, s.subtrees_per_sentence,
                     s.avg_vp_size, s.vps_per_sentence, s.wh_phrases_per_sentence}) {
      put(slots, at, x);
    }
  }
  if (groups.count(G::disc_overlap)) {
    const OverlapFeatures o = disc::overlap_features(doc);
    std::size_t at = first_of(G::disc_overlap);
    for (double x : {o.content_local, o.content_global, o.noun_local, o.noun_global,
                     o.stem_local, o.stem_global, o.argument_local, o.argument_global}) {
      put(slots, at, x);
    }
  }
  if (groups.count(G::disc_refex)) {
    guarded(G::disc_refex, [&] {
      const RefExFeatures r = disc::refex_features(doc);
      std::size_t at = first_of(G::disc_refex);
      for (double x : {r.definite_articles_per_word, r.definite_articles_per_sentence,
                       r.pronouns_per_word, r.pronouns_per_sentence,
                       r.personal_pronouns_per_word, r.personal_pronouns_per_sentence,
                       r.possessive_pronouns_per_word, r.possessive_pronouns_per_sentence,
                       r.pronouns_per_noun, r.proper_nouns_per_noun}) {
        put(slots, at, x);
      }
    });
  }
  if (groups.count(G::disc_conn)) {
    const ConnectiveFeatures c = disc::connective_features(doc, *resources_.connectives);
    std::size_t at = first_of(G::disc_conn);
    for (double x : {c.discourse, c.non_discourse, c.all, c.expansion, c.contingency,
                     c.comparison, c.temporal}) {
      put(slots, at, x);
    }
  }
  if (groups.count(G::disc_entities)) {
    const EntityFeatures e = disc::entity_grid_features(doc);
    std::size_t at = first_of(G::disc_entities);
    for (double x : e.transitions) put(slots, at, x);
    for (double x : {e.entities_per_sentence, e.entities_per_text, e.unique_entities,
                     e.words_per_entity}) {
      put(slots, at, x);
    }
  }
  if (groups.count(G::disc_chains)) {
    if (!doc.chains) throw MissingLayerError(doc.id, "chains", "Disc-Chains");
    const ChainFeatures c = disc::chain_features(doc);
    std::size_t at = first_of(G::disc_chains);
    put(slots, at, c.average_length);
    for (int k = 0; k < kNumMentionKinds; ++k) {
      if (static_cast<MentionKind>(k) == MentionKind::other) continue;
      put(slots, at, c.proportions[static_cast<std::size_t>(k)]);
    }
  }
  if (groups.count(G::error)) {
    const ErrorProfile e = err::error_features(doc, resources_.dictionary);
    std::size_t at = first_of(G::error);
    for (double x : {e.spelling_per_sentence, e.non_spelling_per_sentence, e.all_per_sentence,
                     e.spelling_share}) {
      put(slots, at, x);
    }
  }

  FeatureVector v;
  v.id = doc.id;
  v.prompt = doc.prompt;
  v.l1 = doc.l1;
  v.label = doc.label;
  v.score = doc.score;
  v.values.reserve(profile.features.size());
  for (const std::string& name : profile.features) {
    const std::optional<double>& slot = slots[catalog_index(name)];
    if (slot && std::isfinite(*slot)) {
      v.values.push_back(*slot);
    } else {
      v.values.push_back(0.0);
      v.imputed.push_back(name);
    }
  }
  return v;
}

FeatureMatrix extract_corpus(std::span<const EssayDoc> docs, const FeatureProfile& profile,
                             const FeatureExtractor& extractor, Execution exec) {
  extractor.check_resources(profile);
  FeatureMatrix m{profile, std::vector<FeatureVector>(docs.size())};
  for_each_index(docs.size(), exec,
                 [&](std::size_t i) { m.rows[i] = extractor.assemble(docs[i], profile); });
  return m;
}

NormalizationStats fit_normalization(const Matrix& train, const std::vector<bool>& skip) {
  NormalizationStats s;
  s.min.assign(train.cols(), 0.0);
  s.max.assign(train.cols(), 0.0);
  for (std::size_t c = 0; c < train.cols(); ++c) {
    bool seen = false;
    double lo = 0.0, hi = 0.0;
    for (std::size_t r = 0; r < train.rows(); ++r) {
      if (!skip.empty() && skip[r * train.cols() + c]) continue;
      const double v = train(r, c);
      lo = seen ? std::min(lo, v) : v;
      hi = seen ? std::max(hi, v) : v;
      seen = true;
    }
    s.min[c] = lo;
    s.max[c] = hi;
  }
  return s;
}

std::vector<bool> imputed_mask(const FeatureMatrix& m) {
  const std::size_t cols = m.profile.features.size();
  std::vector<bool> mask(m.rows.size() * cols, false);
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    for (const std::string& name : m.rows[r].imputed) {
      auto it = std::find(m.profile.features.begin(), m.profile.features.end(), name);
      if (it != m.profile.features.end()) {
        mask[r * cols + static_cast<std::size_t>(it - m.profile.features.begin())] = true;
      }
    }
  }
  return mask;
}

Matrix apply_normalization(const Matrix& m, const NormalizationStats& stats) {
  if (stats.min.size() != m.cols() || stats.max.size() != m.cols()) {
    throw ValidationError("normalization statistics do not match the matrix width");
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double range = stats.max[c] - stats.min[c];
      if (!(range > 0.0)) continue;
      const double x = (m(r, c) - stats.min[c]) / range;
      out(r, c) = std::clamp(x, 0.0, 1.0);
    }
  }
  return out;
}

Matrix denormalize(const Matrix& m, const NormalizationStats& stats) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out(r, c) = stats.min[c] + m(r, c) * (stats.max[c] - stats.min[c]);
    }
  }
  return out;
}

Normalized normalize(const Matrix& train) {
  if (train.rows() < 2) throw ConfigError("normalization needs at least two rows");
  NormalizationStats stats = fit_normalization(train);
  Matrix m = apply_normalization(train, stats);
  return {std::move(m), std::move(stats)};
}

std::vector<std::string> build_vocabulary(std::span<const std::string> values) {
  std::vector<std::string> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> encode_categorical(const std::string& value,
                                       std::span<const std::string> vocabulary) {
  std::vector<double> out(vocabulary.size(), 0.0);
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), value);
  if (it != vocabulary.end() && *it == value) out[static_cast<std::size_t>(it - vocabulary.begin())] = 1.0;
  return out;
}

Preprocessor Preprocessor::fit(const FeatureMatrix& train) {
  Preprocessor p;
  p.profile_ = train.profile;
  p.stats_ = fit_normalization(train.numeric(), imputed_mask(train));
  std::vector<std::string> prompts, l1s;
  for (const FeatureVector& v : train.rows) {
    prompts.push_back(v.prompt);
    l1s.push_back(v.l1);
  }
  if (p.profile_.include_prompt) p.prompts_ = build_vocabulary(prompts);
  if (p.profile_.include_l1) p.l1s_ = build_vocabulary(l1s);
  return p;
}

std::size_t Preprocessor::dimension() const {
  return stats_.min.size() + prompts_.size() + l1s_.size();
}

Matrix Preprocessor::transform(const FeatureMatrix& data) const {
  const Matrix scaled = apply_normalization(data.numeric(), stats_);
  const std::size_t n = stats_.min.size();
  Matrix out(data.rows.size(), dimension());
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    auto row = out.row(r);
    std::copy(scaled.row(r).begin(), scaled.row(r).end(), row.begin());
    std::size_t at = n;
    for (double x : encode_categorical(data.rows[r].prompt, prompts_)) row[at++] = x;
    for (double x : encode_categorical(data.rows[r].l1, l1s_)) row[at++] = x;
  }
  return out;
}

std::vector<std::string> Preprocessor::expanded_names() const {
  std::vector<std::string> out = profile_.features;
  for (const std::string& p : prompts_) out.push_back("prompt=" + p);
  for (const std::string& l : l1s_) out.push_back("l1=" + l);
  return out;
}

nlohmann::json Preprocessor::to_json() const {
  return {{"profile", profile_to_json(profile_)},
          {"normalization", {{"min", stats_.min}, {"max", stats_.max}}},
          {"prompt_vocabulary", prompts_},
          {"l1_vocabulary", l1s_}};
}

Preprocessor Preprocessor::from_json(const nlohmann::json& j) {
  Preprocessor p;
  p.profile_ = profile_from_json(j.at("profile"));
  try {
    p.stats_.min = j.at("normalization").at("min").get<std::vector<double>>();
    p.stats_.max = j.at("normalization").at("max").get<std::vector<double>>();
    p.prompts_ = j.at("prompt_vocabulary").get<std::vector<std::string>>();
    p.l1s_ = j.at("l1_vocabulary").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed preprocessor: ") + e.what());
  }
  if (p.stats_.min.size() != p.profile_.features.size() ||
      p.stats_.max.size() != p.profile_.features.size()) {
    throw ValidationError("normalization statistics do not match the profile");
  }
  return p;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_feature_csv(std::ostream& out, const FeatureMatrix& m) {
  std::vector<std::string> prompts, l1s;
  for (const FeatureVector& v : m.rows) {
    prompts.push_back(v.prompt);
    l1s.push_back(v.l1);
  }
  const auto prompt_vocab = m.profile.include_prompt ? build_vocabulary(prompts)
                                                     : std::vector<std::string>{};
  const auto l1_vocab = m.profile.include_l1 ? build_vocabulary(l1s) : std::vector<std::string>{};

  out << "id";
  for (const std::string& f : m.profile.features) out << ',' << csv_field(f);
  for (const std::string& p : prompt_vocab) out << ',' << csv_field("prompt=" + p);
  for (const std::string& l : l1_vocab) out << ',' << csv_field("l1=" + l);
  out << ",label,score\n";
  for (const FeatureVector& v : m.rows) {
    out << csv_field(v.id);
    for (double x : v.values) out << ',' << format_double(x);
    for (double x : encode_categorical(v.prompt, prompt_vocab)) out << ',' << format_double(x);
    for (double x : encode_categorical(v.l1, l1_vocab)) out << ',' << format_double(x);
    out << ',' << (v.label ? std::string(to_string(*v.label)) : std::string());
    out << ',' << (v.score ? format_double(*v.score) : std::string());
    out << '\n';
  }
}

nlohmann::json feature_sidecar(const FeatureMatrix& m, std::uint64_t seed) {
  const NormalizationStats stats = fit_normalization(m.numeric(), imputed_mask(m));
  nlohmann::json imputed = nlohmann::json::object();
  for (const FeatureVector& v : m.rows) {
    if (!v.imputed.empty()) imputed[v.id] = v.imputed;
  }
  return {{"format_version", 1},
          {"profile", profile_to_json(m.profile)},
          {"rows", m.rows.size()},
          {"seed", seed},
          {"normalization", {{"min", stats.min}, {"max", stats.max}}},
          {"imputed", imputed}};
}

}  // namespace aes
