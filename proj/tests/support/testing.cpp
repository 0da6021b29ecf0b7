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

#include "testing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "aes/treeops.hpp"

namespace aes::testing {
namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng() % v.size()];
}

bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

const std::vector<std::string> kNouns = {"city", "dog", "book", "school", "teacher", "idea", "house"};
const std::vector<std::string> kPlurals = {"cities", "dogs", "books", "schools", "teachers", "ideas"};
const std::vector<std::string> kNames = {"Berlin", "Anna", "Tokyo"};
const std::vector<std::string> kPronouns = {"it", "they", "we", "she", "himself"};
const std::vector<std::string> kAdjectives = {"big", "old", "young", "cheap", "useful"};
const std::vector<std::string> kAdverbs = {"very", "often", "however", "too"};
const std::vector<std::pair<std::string, std::string>> kVbz = {
    {"offers", "offer"}, {"helps", "help"}, {"likes", "like"}, {"is", "be"}};
const std::vector<std::pair<std::string, std::string>> kVbd = {
    {"offered", "offer"}, {"helped", "help"}, {"liked", "like"}, {"was", "be"}};
const std::vector<std::pair<std::string, std::string>> kVbp = {
    {"offer", "offer"}, {"help", "help"}, {"like", "like"}, {"are", "be"}};
const std::vector<std::string> kBase = {"offer", "help", "read", "see"};
const std::vector<std::string> kGerunds = {"reading", "helping", "seeing"};
const std::vector<std::string> kSubordinators = {"because", "that", "when", "although", "if"};

std::string leaf(const std::string& tag, const std::string& word) {
  return "(" + tag + " " + word + ")";
}

std::string np(Rng& rng, int depth);
std::string vp(Rng& rng, int depth);

std::string clause(Rng& rng, int depth) {
  if (depth > 1 && chance(rng, 0.12)) {
    return "(S " + clause(rng, depth - 1) + " (CC and) " + clause(rng, depth - 1) + ")";
  }
  if (depth > 1 && chance(rng, 0.08)) {
    return "(S (S (VP " + leaf("VBG", pick(rng, kGerunds)) + " " + np(rng, 1) + ")) " +
           vp(rng, depth - 1) + ")";
  }
  return "(S " + np(rng, depth - 1) + " " + vp(rng, depth - 1) + ")";
}

std::string np(Rng& rng, int depth) {
  const int choice = static_cast<int>(rng() % (depth > 1 ? 10 : 6));
  switch (choice) {
    case 0: return "(NP " + leaf("PRP", pick(rng, kPronouns)) + ")";
    case 1: return "(NP " + leaf("NNP", pick(rng, kNames)) + ")";
    case 2:
      return "(NP " + leaf("DT", chance(rng, 0.5) ? "the" : "a") + " " +
             leaf("JJ", pick(rng, kAdjectives)) + " " + leaf("NNS", pick(rng, kPlurals)) + ")";
    case 3: return "(NP " + leaf("PRP$", "their") + " " + leaf("NN", pick(rng, kNouns)) + ")";
    case 4:
      return "(NP " + leaf("DT", chance(rng, 0.3) ? "this" : "the") + " " +
             leaf("NN", pick(rng, kNouns)) + ")";
    case 5: return "(NP " + leaf("NNS", pick(rng, kPlurals)) + ")";
    case 6:
      return "(NP " + np(rng, depth - 1) + " (PP " + leaf("IN", "in") + " " + np(rng, depth - 1) +
             "))";
    case 7:
      return "(NP " + np(rng, 1) + " (, ,) " + np(rng, 1) + " (, ,))";
    case 8:
      return "(NP " + np(rng, 1) + " (SBAR (WHNP " + leaf("WP", "who") + ") (S " +
             vp(rng, depth - 1) + ")))";
    default:
      return "(NP " + np(rng, 1) + " " + leaf("CC", "and") + " " + np(rng, 1) + ")";
  }
}

std::string finite_verb(Rng& rng) {
  switch (rng() % 3) {
    case 0: return leaf("VBZ", pick(rng, kVbz).first);
    case 1: return leaf("VBD", pick(rng, kVbd).first);
    default: return leaf("VBP", pick(rng, kVbp).first);
  }
}

std::string vp(Rng& rng, int depth) {
  const int choice = static_cast<int>(rng() % (depth > 1 ? 9 : 5));
  switch (choice) {
    case 0: return "(VP " + finite_verb(rng) + " " + np(rng, depth - 1) + ")";
    case 1: return "(VP " + finite_verb(rng) + ")";
    case 2:
      return "(VP " + leaf("MD", "will") + " (VP " + leaf("VB", pick(rng, kBase)) + " " +
             np(rng, depth - 1) + "))";
    case 3:
      return "(VP " + leaf("VBZ", "is") + " (ADJP " + leaf("RB", "very") + " " +
             leaf("JJ", pick(rng, kAdjectives)) + "))";
    case 4:
      return "(VP " + finite_verb(rng) + " (ADVP " + leaf("RB", pick(rng, kAdverbs)) + "))";
    case 5:
      return "(VP " + finite_verb(rng) + " (SBAR " + leaf("IN", pick(rng, kSubordinators)) + " " +
             clause(rng, depth - 1) + "))";
    case 6:
      return "(VP (VP " + finite_verb(rng) + ") " + leaf("CC", chance(rng, 0.5) ? "and" : "but") +
             " (VP " + finite_verb(rng) + " " + np(rng, 1) + "))";
    case 7:
      return "(VP " + finite_verb(rng) + " " + np(rng, depth - 1) + " (PP " + leaf("IN", "for") +
             " " + np(rng, depth - 1) + "))";
    default:
      return "(VP " + leaf("VBZ", "wants") + " (S (VP " + leaf("TO", "to") + " (VP " +
             leaf("VB", pick(rng, kBase)) + " " + np(rng, 1) + "))))";
  }
}

const std::vector<std::pair<std::string, std::string>>& all_lemmas() {
  static const auto table = [] {
    std::vector<std::pair<std::string, std::string>> t;
    for (const auto* v : {&kVbz, &kVbd, &kVbp}) t.insert(t.end(), v->begin(), v->end());
    return t;
  }();
  return table;
}

}  // namespace

EssayDoc doc_from_parses(const std::string& id, const std::vector<std::string>& parses) {
  EssayDoc doc;
  doc.id = id;
  for (const std::string& p : parses) {
    Sentence s;
    s.parse = p;
    const ParseTree t = tree::parse_ptb(p);
    for (int leaf_id : t.leaves()) {
      Token tok;
      tok.form = t.node(leaf_id).word;
      tok.pos = t.node(leaf_id).label;
      tok.index = s.tokens.size();
      s.tokens.push_back(tok);
    }
    doc.sentences.push_back(std::move(s));
  }
  doc.chains.emplace();
  return doc;
}

std::string random_parse(Rng& rng) {
  const int depth = 2 + static_cast<int>(rng() % 3);
  switch (rng() % 8) {
    case 0:
      return "(ROOT (SQ " + leaf("VBZ", "Is") + " " + np(rng, 1) + " (ADJP " +
             leaf("JJ", pick(rng, kAdjectives)) + ") (. ?)))";
    case 1:
      return "(ROOT (SINV (ADVP " + leaf("RB", "Never") + ") " + leaf("VBD", "did") + " " +
             np(rng, 1) + " (VP " + leaf("VB", pick(rng, kBase)) + " " + np(rng, 1) + ") (. .)))";
    case 2:
      return "(ROOT (S (ADVP " + leaf("RB", "However") + ") (, ,) " + np(rng, depth - 1) + " " +
             vp(rng, depth - 1) + " (. .)))";
    case 3:
      return "(ROOT (S (SBAR " + leaf("IN", "When") + " " + clause(rng, 1) + ") (, ,) " +
             np(rng, 1) + " " + vp(rng, depth - 1) + " (. .)))";
    default: {
      std::string s = clause(rng, depth);
      s.insert(s.size() - 1, " (. .)");
      return "(ROOT " + s + ")";
    }
  }
}

EssayDoc random_doc(Rng& rng, const std::string& id, std::size_t min_sentences,
                    std::size_t max_sentences) {
  const std::size_t n = min_sentences + rng() % (max_sentences - min_sentences + 1);
  std::vector<std::string> parses;
  for (std::size_t i = 0; i < n; ++i) parses.push_back(random_parse(rng));
  EssayDoc doc = doc_from_parses(id, parses);
  doc.prompt = "P" + std::to_string(rng() % 3);
  doc.l1 = pick(rng, std::vector<std::string>{"DEU", "ITA", "JPN", "ZHO"});
  doc.label = static_cast<Proficiency>(rng() % 3);
  if (chance(rng, 0.7)) doc.score = static_cast<double>(rng() % 60) / 10.0;

  for (Sentence& s : doc.sentences) {
    for (Token& t : s.tokens) {
      if (t.pos.starts_with("VB") && chance(rng, 0.6)) {
        for (const auto& [form, lemma] : all_lemmas()) {
          if (form == t.form) t.lemma = lemma;
        }
      }
      if (t.pos.starts_with("NN") && chance(rng, 0.3)) t.stem = fallback_stem(t.form) + "x";
    }
    if (chance(rng, 0.15)) {
      s.connectives.emplace();
      const std::size_t k = rng() % 3;
      for (std::size_t j = 0; j < k; ++j) {
        ConnectiveAnnotation a;
        a.index = rng() % s.tokens.size();
        if (chance(rng, 0.6)) {
          a.usage = ConnectiveUsage::discourse;
          a.sense = static_cast<ConnectiveSense>(1 + rng() % 4);
        } else {
          a.usage = ConnectiveUsage::non_discourse;
        }
        s.connectives->push_back(a);
      }
    }
  }

  auto random_span = [&](std::size_t& sentence, std::size_t& start, std::size_t& end) {
    sentence = rng() % doc.sentences.size();
    const std::size_t len = doc.sentences[sentence].tokens.size();
    start = rng() % len;
    end = std::min(len - 1, start + rng() % 3);
  };
  const std::size_t chains = rng() % 4;
  for (std::size_t c = 0; c < chains; ++c) {
    CorefChain chain;
    const std::size_t m = 1 + rng() % 3;
    for (std::size_t j = 0; j < m; ++j) {
      Mention mention;
      random_span(mention.sentence, mention.start, mention.end);
      if (chance(rng, 0.2)) mention.kind = static_cast<MentionKind>(rng() % kNumMentionKinds);
      chain.mentions.push_back(mention);
    }
    doc.chains->push_back(chain);
  }
  if (chance(rng, 0.7)) {
    doc.errors.emplace();
    const std::size_t k = rng() % 4;
    for (std::size_t j = 0; j < k; ++j) {
      ErrorAnnotation e;
      random_span(e.sentence, e.start, e.end);
      e.kind = chance(rng, 0.5) ? ErrorKind::spelling : ErrorKind::non_spelling;
      doc.errors->push_back(e);
    }
  }
  return doc;
}

std::vector<std::string> random_words(Rng& rng, std::size_t n, std::size_t vocab) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(rng() % vocab));
  return out;
}

std::vector<EssayDoc> synthetic_corpus(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<std::string> nouns = {"city",  "house", "school", "street", "park",
                                          "river", "forest", "market", "museum", "bridge",
                                          "garden", "library", "station", "harbour"};
  const std::vector<std::string> adjectives = {"large", "quiet", "modern", "famous", "ancient"};
  constexpr std::size_t kSentences = 60;

  std::vector<EssayDoc> docs;
  for (int level = 0; level < 3; ++level) {
    for (std::size_t e = 0; e < per_class; ++e) {
      const double z = level + unit(rng);
      const std::size_t vocab = 4 + static_cast<std::size_t>(std::lround(3.0 * z));
      auto planted = [&](double share) {
        std::vector<bool> flags(kSentences, false);
        const auto k = static_cast<std::size_t>(std::lround(share * kSentences));
        std::fill(flags.begin(), flags.begin() + static_cast<long>(k), true);
        std::shuffle(flags.begin(), flags.end(), rng);
        return flags;
      };
      const auto subordinate = planted(z / 3.0);
      const auto modified = planted(z / 3.0);
      const auto erroneous = planted((3.0 - z) / 3.0);

      std::vector<std::string> parses;
      for (std::size_t s = 0; s < kSentences; ++s) {
        std::string subject = "(NP (DT the) ";
        if (modified[s]) subject += leaf("JJ", pick(rng, adjectives)) + " ";
        subject += leaf("NN", nouns[rng() % vocab]) + ")";
        std::string object = "(NP (DT a) " + leaf("NN", nouns[rng() % vocab]) + ")";
        std::string verb = "(VP (VBD had) " + object;
        if (subordinate[s]) {
          verb += " (SBAR (IN because) (S (NP (PRP it)) (VP (VBD was) (ADJP " +
                  leaf("JJ", pick(rng, adjectives)) + "))))";
        }
        verb += ")";
        parses.push_back("(ROOT (S " + subject + " " + verb + " (. .)))");
      }
      EssayDoc doc = doc_from_parses("syn" + std::to_string(level) + "_" + std::to_string(e), parses);
      doc.prompt = "P" + std::to_string(rng() % 4);
      doc.l1 = pick(rng, std::vector<std::string>{"ARA", "DEU", "ITA", "JPN", "ZHO"});
      doc.label = static_cast<Proficiency>(level);
      doc.score = z;
      doc.errors.emplace();
      for (std::size_t s = 0; s < kSentences; ++s) {
        if (erroneous[s]) doc.errors->push_back({s, ErrorKind::spelling, 2, 2});
      }
      docs.push_back(std::move(doc));
    }
  }
  return docs;
}

double qp_oracle_objective(const DualProblem& problem, const Matrix& gram) {
  const auto n = static_cast<Eigen::Index>(problem.y.size());
  const double C = problem.C;
  Eigen::MatrixXd Q(n, n);
  Eigen::VectorXd p(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = problem.p[static_cast<std::size_t>(i)];
    y(i) = problem.y[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Q(i, j) = y(i) * y(j) *
                gram(problem.row[static_cast<std::size_t>(i)], problem.row[static_cast<std::size_t>(j)]);
    }
  }
  // Primal-dual path following on  Qb + p + nu*y - zl + zu = 0,  y'b = 0,
  // b*zl = mu, (C - b)*zu = mu.
  Eigen::VectorXd b = Eigen::VectorXd::Constant(n, C / 2), zl = Eigen::VectorXd::Ones(n),
                  zu = Eigen::VectorXd::Ones(n);
  double nu = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd sl = b, su = Eigen::VectorXd::Constant(n, C) - b;
    const double gap = sl.dot(zl) + su.dot(zu);
    const Eigen::VectorXd rd = Q * b + p + nu * y - zl + zu;
    const double re = y.dot(b);
    if (gap < 1e-11 && rd.norm() < 1e-10 && std::abs(re) < 1e-10) break;
    const double mu = 0.1 * gap / static_cast<double>(2 * n);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    K.topLeftCorner(n, n) = Q;
    K.diagonal().head(n) += (zl.array() / sl.array() + zu.array() / su.array()).matrix();
    K.block(0, n, n, 1) = y;
    K.block(n, 0, 1, n) = y.transpose();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -rd + (mu / sl.array() - zl.array()).matrix() -
                  (mu / su.array() - zu.array()).matrix();
    rhs(n) = -re;
    const Eigen::VectorXd d = K.fullPivLu().solve(rhs);
    const Eigen::VectorXd db = d.head(n);
    const double dnu = d(n);
    const Eigen::VectorXd dzl = ((mu - (sl.array() * zl.array())) / sl.array() -
                                 zl.array() * db.array() / sl.array()).matrix();
    const Eigen::VectorXd dzu = ((mu - (su.array() * zu.array())) / su.array() +
                                 zu.array() * db.array() / su.array()).matrix();
    double step = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (db(i) < 0) step = std::min(step, -0.99 * sl(i) / db(i));
      if (db(i) > 0) step = std::min(step, 0.99 * su(i) / db(i));
      if (dzl(i) < 0) step = std::min(step, -0.99 * zl(i) / dzl(i));
      if (dzu(i) < 0) step = std::min(step, -0.99 * zu(i) / dzu(i));
    }
    const Eigen::VectorXd nb = b + step * db;
    // Stop on the last interior iterate once the slacks underflow.
    if (!nb.allFinite() || (nb.array() <= 0).any() || (nb.array() >= C).any()) break;
    b = nb;
    nu += step * dnu;
    zl += step * dzl;
    zu += step * dzu;
  }
  return 0.5 * b.dot(Q * b) + p.dot(b);
}

std::filesystem::path source_dir() { return AES_SOURCE_DIR; }
std::filesystem::path aesfeat_path() { return AESFEAT_PATH; }

int run(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace aes::testing
