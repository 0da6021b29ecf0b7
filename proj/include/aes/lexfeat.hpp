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

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aes {

struct EssayDoc;

struct TtrFamily {
  double ttr = 0.0;
  double corrected_ttr = 0.0;
  double root_ttr = 0.0;
  std::optional<double> bilog_ttr;  // undefined for a single token
};

struct LexicalProfile {
  TtrFamily ttr;
  std::optional<double> mtld;  // undefined when no factor completes
};

namespace lex {

inline constexpr double kMtldThreshold = 0.72;

// Case-folded forms of the essay's word tokens (punctuation excluded).
std::vector<std::string> word_forms(const EssayDoc& doc);

// Types are counted over the forms as given; callers pass folded forms.
// Throws UndefinedInputError on an empty sequence.
TtrFamily ttr_family(std::span<const std::string> tokens);

// Bidirectional MTLD: mean of the forward and backward factor lengths.
// Returns nullopt when the factor count is zero (every token distinct).
std::optional<double> mtld(std::span<const std::string> tokens,
                           double threshold = kMtldThreshold);

// One direction of MTLD; the factor count comes back through `factors`.
double mtld_pass(std::span<const std::string> tokens, double threshold, double& factors);

LexicalProfile lexical_profile(const EssayDoc& doc);

}  // namespace lex
}  // namespace aes
