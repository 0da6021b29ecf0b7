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

#include "aes/lexfeat.hpp"

#include <cmath>
#include <unordered_set>

#include "aes/annotate.hpp"
#include "aes/errors.hpp"
#include "aes/tags.hpp"

namespace aes::lex {

std::vector<std::string> word_forms(const EssayDoc& doc) {
  std::vector<std::string> out;
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) {
      if (tags::is_word(t.pos)) out.push_back(text::fold_case(t.form));
    }
  }
  return out;
}

TtrFamily ttr_family(std::span<const std::string> tokens) {
  if (tokens.empty()) throw UndefinedInputError("type-token ratios need at least one token");
  std::unordered_set<std::string_view> types(tokens.begin(), tokens.end());
  const double t = static_cast<double>(types.size());
  const double n = static_cast<double>(tokens.size());
  TtrFamily f;
  f.ttr = t / n;
  f.corrected_ttr = t / std::sqrt(2.0 * n);
  f.root_ttr = t / std::sqrt(n);
  if (tokens.size() > 1) f.bilog_ttr = std::log(t) / std::log(n);
  return f;
}

double mtld_pass(std::span<const std::string> tokens, double threshold, double& factors) {
  factors = 0.0;
  std::unordered_set<std::string_view> types;
  std::size_t count = 0;
  for (const std::string& tok : tokens) {
    types.insert(tok);
    ++count;
    const double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
    if (ttr < threshold) {
      factors += 1.0;
      types.clear();
      count = 0;
    }
  }
  if (count > 0) {
    const double ttr = static_cast<double>(types.size()) / static_cast<double>(count);
    factors += (1.0 - ttr) / (1.0 - threshold);
  }
  return factors > 0.0 ? static_cast<double>(tokens.size()) / factors : 0.0;
}

std::optional<double> mtld(std::span<const std::string> tokens, double threshold) {
  if (tokens.empty()) throw UndefinedInputError("MTLD needs at least one token");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("MTLD threshold must lie in (0, 1)");
  }
  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  double forward_factors = 0.0;
  double backward_factors = 0.0;
  const double forward = mtld_pass(tokens, threshold, forward_factors);
  const double backward = mtld_pass(reversed, threshold, backward_factors);
  if (forward_factors == 0.0 || backward_factors == 0.0) return std::nullopt;
  return (forward + backward) / 2.0;
}

LexicalProfile lexical_profile(const EssayDoc& doc) {
  const std::vector<std::string> words = word_forms(doc);
  LexicalProfile p;
  p.ttr = ttr_family(words);
  p.mtld = mtld(words);
  return p;
}

}  // namespace aes::lex
