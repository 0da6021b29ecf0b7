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

#include "aes/annotate.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "aes/errors.hpp"
#include "aes/tags.hpp"
#include "aes/treeops.hpp"
#include "json.hpp"

namespace aes {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 3> kProficiencyNames = {"low", "medium", "high"};
constexpr std::array<std::string_view, 2> kUsageNames = {"discourse", "non-discourse"};
constexpr std::array<std::string_view, 5> kSenseNames = {
    "none", "Expansion", "Contingency", "Comparison", "Temporal"};
constexpr std::array<std::string_view, kNumMentionKinds> kMentionNames = {
    "personal_pronoun",      "demonstrative_pronoun",    "reflexive_pronoun",
    "proper_noun",           "possessive_determiner",    "demonstrative_determiner",
    "indefinite_np",         "definite_np",              "other"};
constexpr std::array<std::string_view, 2> kErrorNames = {"spelling", "non-spelling"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

// Schema errors while decoding one essay line.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("missing field '" + path + key + "'");
  return *it;
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError("field '" + path + "' must be a string");
  return v.get<std::string>();
}

std::size_t get_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw SchemaError("field '" + path + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

const json& get_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError("field '" + path + "' must be an array");
  return v;
}

Token decode_token(const json& j, const std::string& path, std::size_t index) {
  if (!j.is_object()) throw SchemaError("field '" + path + "' must be an object");
  Token t;
  t.form = get_string(require(j, "form", path + "."), path + ".form");
  t.pos = get_string(require(j, "pos", path + "."), path + ".pos");
  if (auto it = j.find("lemma"); it != j.end()) t.lemma = get_string(*it, path + ".lemma");
  if (auto it = j.find("stem"); it != j.end()) t.stem = get_string(*it, path + ".stem");
  t.index = index;
  return t;
}

Sentence decode_sentence(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError("field '" + path + "' must be an object");
  Sentence s;
  const json& tokens = get_array(require(j, "tokens", path + "."), path + ".tokens");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    s.tokens.push_back(decode_token(tokens[i], path + ".tokens[" + std::to_string(i) + "]", i));
  }
  if (auto it = j.find("parse"); it != j.end()) s.parse = get_string(*it, path + ".parse");
  if (auto it = j.find("connectives"); it != j.end()) {
    const json& arr = get_array(*it, path + ".connectives");
    std::vector<ConnectiveAnnotation> conns;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string p = path + ".connectives[" + std::to_string(i) + "]";
      ConnectiveAnnotation c;
      c.index = get_index(require(arr[i], "index", p + "."), p + ".index");
      auto usage = parse_connective_usage(get_string(require(arr[i], "usage", p + "."), p + ".usage"));
      if (!usage) throw SchemaError("field '" + p + ".usage' has an unknown value");
      c.usage = *usage;
      if (auto sit = arr[i].find("sense"); sit != arr[i].end()) {
        auto sense = parse_connective_sense(get_string(*sit, p + ".sense"));
        if (!sense) throw SchemaError("field '" + p + ".sense' has an unknown value");
        c.sense = *sense;
      }
      conns.push_back(c);
    }
    s.connectives = std::move(conns);
  }
  return s;
}

EssayDoc decode_essay(const json& j) {
  if (!j.is_object()) throw SchemaError("essay must be a JSON object");
  EssayDoc doc;
  doc.id = get_string(require(j, "id", ""), "id");
  if (auto it = j.find("prompt"); it != j.end()) doc.prompt = get_string(*it, "prompt");
  if (auto it = j.find("l1"); it != j.end()) doc.l1 = get_string(*it, "l1");
  if (auto it = j.find("label"); it != j.end()) {
    auto p = parse_proficiency(get_string(*it, "label"));
    if (!p) throw SchemaError("field 'label' must be one of low, medium, high");
    doc.label = *p;
  }
  if (auto it = j.find("score"); it != j.end()) {
    if (!it->is_number()) throw SchemaError("field 'score' must be a number");
    doc.score = it->get<double>();
  }
  const json& sentences = get_array(require(j, "sentences", ""), "sentences");
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    doc.sentences.push_back(decode_sentence(sentences[i], "sentences[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("chains"); it != j.end()) {
    const json& arr = get_array(*it, "chains");
    std::vector<CorefChain> chains;
    for (std::size_t c = 0; c < arr.size(); ++c) {
      std::string p = "chains[" + std::to_string(c) + "]";
      const json& ms = get_array(require(arr[c], "mentions", p + "."), p + ".mentions");
      CorefChain chain;
      for (std::size_t m = 0; m < ms.size(); ++m) {
        std::string mp = p + ".mentions[" + std::to_string(m) + "]";
        Mention mention;
        mention.sentence = get_index(require(ms[m], "sentence", mp + "."), mp + ".sentence");
        mention.start = get_index(require(ms[m], "start", mp + "."), mp + ".start");
        mention.end = get_index(require(ms[m], "end", mp + "."), mp + ".end");
        if (auto kit = ms[m].find("kind"); kit != ms[m].end()) {
          auto kind = parse_mention_kind(get_string(*kit, mp + ".kind"));
          if (!kind) throw SchemaError("field '" + mp + ".kind' has an unknown value");
          mention.kind = *kind;
        }
        chain.mentions.push_back(mention);
      }
      chains.push_back(std::move(chain));
    }
    doc.chains = std::move(chains);
  }
  if (auto it = j.find("errors"); it != j.end()) {
    const json& arr = get_array(*it, "errors");
    std::vector<ErrorAnnotation> errors;
    for (std::size_t e = 0; e < arr.size(); ++e) {
      std::string p = "errors[" + std::to_string(e) + "]";
      ErrorAnnotation err;
      err.sentence = get_index(require(arr[e], "sentence", p + "."), p + ".sentence");
      auto kind = parse_error_kind(get_string(require(arr[e], "kind", p + "."), p + ".kind"));
      if (!kind) throw SchemaError("field '" + p + ".kind' must be spelling or non-spelling");
      err.kind = *kind;
      err.start = get_index(require(arr[e], "start", p + "."), p + ".start");
      err.end = get_index(require(arr[e], "end", p + "."), p + ".end");
      errors.push_back(err);
    }
    doc.errors = std::move(errors);
  }
  return doc;
}

json encode_essay(const EssayDoc& doc) {
  json j = json::object();
  j["id"] = doc.id;
  if (!doc.prompt.empty()) j["prompt"] = doc.prompt;
  if (!doc.l1.empty()) j["l1"] = doc.l1;
  if (doc.label) j["label"] = std::string(to_string(*doc.label));
  if (doc.score) j["score"] = *doc.score;
  json sentences = json::array();
  for (const Sentence& s : doc.sentences) {
    json js = json::object();
    json tokens = json::array();
    for (const Token& t : s.tokens) {
      json jt = json::object();
      jt["form"] = t.form;
      if (t.lemma) jt["lemma"] = *t.lemma;
      if (t.stem) jt["stem"] = *t.stem;
      jt["pos"] = t.pos;
      tokens.push_back(std::move(jt));
    }
    js["tokens"] = std::move(tokens);
    if (s.parse) js["parse"] = *s.parse;
    if (s.connectives) {
      json conns = json::array();
      for (const ConnectiveAnnotation& c : *s.connectives) {
        json jc = json::object();
        jc["index"] = c.index;
        jc["usage"] = std::string(to_string(c.usage));
        if (c.sense != ConnectiveSense::none) jc["sense"] = std::string(to_string(c.sense));
        conns.push_back(std::move(jc));
      }
      js["connectives"] = std::move(conns);
    }
    sentences.push_back(std::move(js));
  }
  j["sentences"] = std::move(sentences);
  if (doc.chains) {
    json chains = json::array();
    for (const CorefChain& c : *doc.chains) {
      json mentions = json::array();
      for (const Mention& m : c.mentions) {
        json jm = {{"sentence", m.sentence}, {"start", m.start}, {"end", m.end}};
        if (m.kind) jm["kind"] = std::string(to_string(*m.kind));
        mentions.push_back(std::move(jm));
      }
      chains.push_back(json{{"mentions", std::move(mentions)}});
    }
    j["chains"] = std::move(chains);
  }
  if (doc.errors) {
    json errors = json::array();
    for (const ErrorAnnotation& e : *doc.errors) {
      errors.push_back(json{{"sentence", e.sentence},
                            {"kind", std::string(to_string(e.kind))},
                            {"start", e.start},
                            {"end", e.end}});
    }
    j["errors"] = std::move(errors);
  }
  return j;
}

bool is_demonstrative(std::string_view folded) {
  return folded == "this" || folded == "that" || folded == "these" || folded == "those";
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view to_string(Proficiency p) { return kProficiencyNames[static_cast<int>(p)]; }
std::optional<Proficiency> parse_proficiency(std::string_view s) {
  return lookup<Proficiency>(s, kProficiencyNames);
}
std::string_view to_string(ConnectiveUsage u) { return kUsageNames[static_cast<int>(u)]; }
std::string_view to_string(ConnectiveSense s) { return kSenseNames[static_cast<int>(s)]; }
std::optional<ConnectiveUsage> parse_connective_usage(std::string_view s) {
  return lookup<ConnectiveUsage>(s, kUsageNames);
}
std::optional<ConnectiveSense> parse_connective_sense(std::string_view s) {
  return lookup<ConnectiveSense>(s, kSenseNames);
}
std::string_view to_string(MentionKind k) { return kMentionNames[static_cast<int>(k)]; }
std::optional<MentionKind> parse_mention_kind(std::string_view s) {
  return lookup<MentionKind>(s, kMentionNames);
}
std::string_view to_string(ErrorKind k) { return kErrorNames[static_cast<int>(k)]; }
std::optional<ErrorKind> parse_error_kind(std::string_view s) {
  return lookup<ErrorKind>(s, kErrorNames);
}

std::size_t EssayDoc::token_count() const {
  std::size_t n = 0;
  for (const Sentence& s : sentences) n += s.tokens.size();
  return n;
}

ValidationReport validate(const EssayDoc& doc) {
  ValidationReport report;
  auto add = [&](std::string field, std::string message) {
    report.push_back({std::move(field), std::move(message)});
  };
  if (doc.id.empty()) add("id", "essay id is empty");
  if (doc.token_count() == 0) add("sentences", "essay has no tokens");

  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& s = doc.sentences[si];
    const std::string sp = "sentences[" + std::to_string(si) + "]";
    for (std::size_t ti = 0; ti < s.tokens.size(); ++ti) {
      const Token& t = s.tokens[ti];
      const std::string tp = sp + ".tokens[" + std::to_string(ti) + "]";
      if (t.form.empty()) add(tp + ".form", "token form is empty");
      if (t.pos.empty()) add(tp + ".pos", "token pos is empty");
      if (t.index != ti) add(tp + ".index", "token indices are not contiguous from 0");
    }
    if (s.parse) {
      try {
        ParseTree tree = tree::parse_ptb(*s.parse);
        if (tree.leaf_count() != s.tokens.size()) {
          add(sp + ".parse", "parse has " + std::to_string(tree.leaf_count()) +
                                 " leaves but sentence has " +
                                 std::to_string(s.tokens.size()) + " tokens");
        }
      } catch (const ParseError& e) {
        add(sp + ".parse", std::string("unparseable bracket string: ") + e.what());
      }
    }
    if (s.connectives) {
      for (std::size_t ci = 0; ci < s.connectives->size(); ++ci) {
        const ConnectiveAnnotation& c = (*s.connectives)[ci];
        const std::string cp = sp + ".connectives[" + std::to_string(ci) + "]";
        if (c.index >= s.tokens.size()) add(cp + ".index", "connective index out of range");
        if (c.usage == ConnectiveUsage::discourse && c.sense == ConnectiveSense::none) {
          add(cp + ".sense", "discourse connective needs a sense");
        }
        if (c.usage == ConnectiveUsage::non_discourse && c.sense != ConnectiveSense::none) {
          add(cp + ".sense", "non-discourse connective cannot carry a sense");
        }
      }
    }
  }

  auto check_span = [&](const std::string& p, std::size_t sentence, std::size_t start,
                        std::size_t end) {
    if (sentence >= doc.sentences.size()) {
      add(p + ".sentence", "sentence index " + std::to_string(sentence) + " out of range");
      return;
    }
    if (start > end) add(p, "span start is after span end");
    if (end >= doc.sentences[sentence].tokens.size()) add(p + ".end", "span exceeds sentence");
  };

  if (doc.chains) {
    for (std::size_t c = 0; c < doc.chains->size(); ++c) {
      const CorefChain& chain = (*doc.chains)[c];
      const std::string cp = "chains[" + std::to_string(c) + "]";
      if (chain.mentions.empty()) add(cp + ".mentions", "chain has no mentions");
      for (std::size_t m = 0; m < chain.mentions.size(); ++m) {
        const Mention& mention = chain.mentions[m];
        check_span(cp + ".mentions[" + std::to_string(m) + "]", mention.sentence, mention.start,
                   mention.end);
      }
    }
  }
  if (doc.errors) {
    for (std::size_t e = 0; e < doc.errors->size(); ++e) {
      const ErrorAnnotation& err = (*doc.errors)[e];
      check_span("errors[" + std::to_string(e) + "]", err.sentence, err.start, err.end);
    }
  }
  return report;
}

EssayDoc parse_essay_json(std::string_view line, std::size_t line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_number) + ": malformed JSON: " + e.what(),
                     line_number);
  }
  std::string id;
  if (j.is_object() && j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
  try {
    return decode_essay(j);
  } catch (const SchemaError& e) {
    throw ValidationError("line " + std::to_string(line_number) + ", essay '" + id +
                          "': " + e.what());
  }
}

std::vector<EssayDoc> read_corpus(std::istream& in) {
  std::vector<EssayDoc> docs;
  std::set<std::string> ids;
  std::vector<std::string> failures;  // one entry per rejected essay
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    EssayDoc doc = parse_essay_json(line, line_number);
    const std::string where = "line " + std::to_string(line_number) + ", essay '" + doc.id + "': ";
    ValidationReport report = validate(doc);
    if (!report.empty()) {
      std::ostringstream msg;
      msg << where;
      for (std::size_t i = 0; i < report.size(); ++i) {
        if (i) msg << "; ";
        msg << report[i].field << ": " << report[i].message;
      }
      failures.push_back(msg.str());
      continue;
    }
    if (!ids.insert(doc.id).second) {
      failures.push_back(where + "field 'id' duplicates an earlier essay");
      continue;
    }
    docs.push_back(std::move(doc));
  }
  if (!failures.empty()) {
    std::string msg = std::to_string(failures.size()) + " invalid essay(s)";
    for (const std::string& f : failures) msg += "\n  " + f;
    throw ValidationError(msg);
  }
  return docs;
}

std::vector<EssayDoc> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus file '" + path.string() + "'");
  return read_corpus(in);
}

std::string serialize_essay(const EssayDoc& doc) { return encode_essay(doc).dump(); }

void write_corpus(std::ostream& out, const std::vector<EssayDoc>& docs) {
  for (const EssayDoc& d : docs) out << serialize_essay(d) << '\n';
}

std::string fallback_stem(std::string_view form) {
  std::string folded = text::fold_case(form);
  if (!text::is_alphabetic(folded)) return folded;
  // Longest suffix first.
  static constexpr std::array<std::string_view, 5> kSuffixes = {"ing", "es", "ed", "ly", "s"};
  for (std::string_view suffix : kSuffixes) {
    if (ends_with(folded, suffix)) {
      if (folded.size() - suffix.size() >= 3) folded.resize(folded.size() - suffix.size());
      return folded;
    }
  }
  return folded;
}

std::string stem_of(const Token& token) {
  if (token.stem && !token.stem->empty()) return *token.stem;
  return fallback_stem(token.form);
}

EssayDoc derive_stems(EssayDoc doc) {
  for (Sentence& s : doc.sentences) {
    for (Token& t : s.tokens) {
      if (!t.stem || t.stem->empty()) t.stem = fallback_stem(t.form);
    }
  }
  return doc;
}

MentionKind mention_kind(const EssayDoc& doc, const Mention& mention) {
  if (mention.kind) return *mention.kind;
  if (mention.sentence >= doc.sentences.size()) return MentionKind::other;
  const auto& tokens = doc.sentences[mention.sentence].tokens;
  if (mention.start >= tokens.size() || mention.end >= tokens.size()) return MentionKind::other;
  const Token& first = tokens[mention.start];
  const std::string folded = text::fold_case(first.form);
  const bool single = mention.start == mention.end;
  if (first.pos == "PRP") {
    if (ends_with(folded, "self") || ends_with(folded, "selves")) {
      return MentionKind::reflexive_pronoun;
    }
    return MentionKind::personal_pronoun;
  }
  if (first.pos == "PRP$") return MentionKind::possessive_determiner;
  if (is_demonstrative(folded) && (first.pos == "DT" || single)) {
    return single ? MentionKind::demonstrative_pronoun : MentionKind::demonstrative_determiner;
  }
  if (folded == "a" || folded == "an") return MentionKind::indefinite_np;
  if (folded == "the") return MentionKind::definite_np;
  if (tags::is_proper_noun(first.pos)) return MentionKind::proper_noun;
  return MentionKind::other;
}

}  // namespace aes
