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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Annotated-essay data model. Essays arrive fully annotated (tags, parses,
// coreference, errors); nothing in this library tokenizes or parses raw text.
namespace aes {

enum class Proficiency { low = 0, medium = 1, high = 2 };
inline constexpr int kNumProficiencyLevels = 3;

std::string_view to_string(Proficiency p);
std::optional<Proficiency> parse_proficiency(std::string_view s);

enum class ConnectiveUsage { discourse, non_discourse };
enum class ConnectiveSense { none, expansion, contingency, comparison, temporal };

std::string_view to_string(ConnectiveUsage u);
std::string_view to_string(ConnectiveSense s);
std::optional<ConnectiveUsage> parse_connective_usage(std::string_view s);
std::optional<ConnectiveSense> parse_connective_sense(std::string_view s);

enum class MentionKind {
  personal_pronoun,
  demonstrative_pronoun,
  reflexive_pronoun,
  proper_noun,
  possessive_determiner,
  demonstrative_determiner,
  indefinite_np,
  definite_np,
  other,
};
inline constexpr int kNumMentionKinds = 9;

std::string_view to_string(MentionKind k);
std::optional<MentionKind> parse_mention_kind(std::string_view s);

enum class ErrorKind { spelling, non_spelling };

std::string_view to_string(ErrorKind k);
std::optional<ErrorKind> parse_error_kind(std::string_view s);

struct Token {
  std::string form;
  std::optional<std::string> lemma;
  std::optional<std::string> stem;
  std::string pos;
  std::size_t index = 0;  // position within the sentence

  bool operator==(const Token&) const = default;
};

struct ConnectiveAnnotation {
  std::size_t index = 0;
  ConnectiveUsage usage = ConnectiveUsage::discourse;
  ConnectiveSense sense = ConnectiveSense::none;

  bool operator==(const ConnectiveAnnotation&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::string> parse;  // PTB bracket string
  // When present, the annotation is authoritative for every connective in
  // the sentence; absent means "derive from the lexicon and the parse".
  std::optional<std::vector<ConnectiveAnnotation>> connectives;

  bool operator==(const Sentence&) const = default;
};

// Token span [start, end], both ends inclusive.
struct Mention {
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<MentionKind> kind;

  bool operator==(const Mention&) const = default;
};

struct CorefChain {
  std::vector<Mention> mentions;
  bool operator==(const CorefChain&) const = default;
};

struct ErrorAnnotation {
  std::size_t sentence = 0;
  ErrorKind kind = ErrorKind::spelling;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const ErrorAnnotation&) const = default;
};

struct EssayDoc {
  std::string id;
  std::string prompt;  // empty when absent
  std::string l1;      // empty when absent
  std::optional<Proficiency> label;
  std::optional<double> score;
  std::vector<Sentence> sentences;
  std::optional<std::vector<CorefChain>> chains;
  std::optional<std::vector<ErrorAnnotation>> errors;

  std::size_t token_count() const;
  bool operator==(const EssayDoc&) const = default;
};

struct Violation {
  std::string field;    // dotted path, e.g. "sentences[1].parse"
  std::string message;
  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

// Checks every structural invariant of the data model. Never throws.
ValidationReport validate(const EssayDoc& doc);

// Corpus I/O: UTF-8 JSON lines, one essay per line, blank lines skipped.
// Malformed JSON throws ParseError at once; validation failures are collected
// and reported together, one line per rejected essay.
std::vector<EssayDoc> load_corpus(const std::filesystem::path& path);
std::vector<EssayDoc> read_corpus(std::istream& in);
EssayDoc parse_essay_json(std::string_view line, std::size_t line_number = 0);
std::string serialize_essay(const EssayDoc& doc);
void write_corpus(std::ostream& out, const std::vector<EssayDoc>& docs);

// Suffix-stripping fallback stemmer used when tokens carry no stem: strip
// the longest of {ing, es, ed, ly, s} from the case-folded form if at least
// three characters remain. Non-alphabetic forms are only case-folded.
std::string fallback_stem(std::string_view form);

// Fills in missing stems; tokens that already have one are left alone.
EssayDoc derive_stems(EssayDoc doc);

// The token's stem, falling back to fallback_stem(form).
std::string stem_of(const Token& token);

// Mention kind from the annotation, or derived from the span's tokens:
// PRP -> personal (reflexive for *self/*selves), NNP/NNPS -> proper noun,
// PRP$ -> possessive determiner, this/that/these/those -> demonstrative
// pronoun when alone and demonstrative determiner otherwise, a/an ->
// indefinite NP, the -> definite NP.
MentionKind mention_kind(const EssayDoc& doc, const Mention& mention);

}  // namespace aes
