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

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aes/annotate.hpp"
#include "aes/matrix.hpp"
#include "aes/parallel.hpp"
#include "json.hpp"

namespace aes {

class ConnectiveLexicon;
class Dictionary;

enum class FeatureGroup {
  doc_len,
  word,
  pos,
  syn,
  disc_overlap,
  disc_refex,
  disc_conn,
  disc_entities,
  disc_chains,
  error,
};

std::string_view group_name(FeatureGroup g);

struct FeatureInfo {
  std::string_view name;
  FeatureGroup group;
  bool extended_only;  // not part of the canonical paper-114 set
  std::string_view note;
};

// Every feature the extractor can emit, in canonical order.
std::span<const FeatureInfo> feature_catalog();
const FeatureInfo* find_feature(std::string_view name);

struct FeatureProfile {
  std::string name;
  std::vector<std::string> features;
  bool include_prompt = true;
  bool include_l1 = true;

  std::set<FeatureGroup> groups() const;
  // Throws ConfigError on duplicate or unknown feature names.
  void check() const;
  bool operator==(const FeatureProfile&) const = default;
};

// Built-in profiles: docLen, Word, POS, Syn, Disc-All, Disc-Overlap,
// Disc-RefEx, Disc-Conn, Disc-Entities, Disc-Chains, Error, paper-114 (alias
// All) and extended, each also with a "-noPrompt" and "-noPromptL1" variant.
FeatureProfile builtin_profile(std::string_view name);
std::vector<std::string> builtin_profile_names();

nlohmann::json profile_to_json(const FeatureProfile& p);
FeatureProfile profile_from_json(const nlohmann::json& j);

struct FeatureVector {
  std::string id;
  std::vector<double> values;   // aligned with the profile's feature order
  std::string prompt;
  std::string l1;
  std::optional<Proficiency> label;
  std::optional<double> score;
  std::vector<std::string> imputed;  // undefined features replaced by 0

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureMatrix {
  FeatureProfile profile;
  std::vector<FeatureVector> rows;

  Matrix numeric() const;
  FeatureMatrix subset(std::span<const std::size_t> indices) const;
};

struct ExtractionResources {
  const ConnectiveLexicon* connectives = nullptr;
  const Dictionary* dictionary = nullptr;
};

class FeatureExtractor {
 public:
  explicit FeatureExtractor(ExtractionResources resources = {}) : resources_(resources) {}

  // Throws ConfigError when the profile needs a resource that was not
  // supplied and MissingLayerError when the essay lacks an annotation layer.
  FeatureVector assemble(const EssayDoc& doc, const FeatureProfile& profile) const;

  void check_resources(const FeatureProfile& profile) const;

 private:
  ExtractionResources resources_;
};

// Rows come back in corpus order whatever the execution mode.
FeatureMatrix extract_corpus(std::span<const EssayDoc> docs, const FeatureProfile& profile,
                             const FeatureExtractor& extractor,
                             Execution exec = Execution::parallel);

// Min-max scaling statistics, fitted on training rows only.
struct NormalizationStats {
  std::vector<double> min;
  std::vector<double> max;
  bool operator==(const NormalizationStats&) const = default;
};

// Per-column min and max over the cells not flagged in `skip` (row-major,
// empty for none). A column with no usable cell gets min = max = 0.
NormalizationStats fit_normalization(const Matrix& train, const std::vector<bool>& skip = {});
// Scales to [0, 1]; constant training columns map to 0 and values outside
// the training range are clamped.
Matrix apply_normalization(const Matrix& m, const NormalizationStats& stats);
Matrix denormalize(const Matrix& m, const NormalizationStats& stats);

struct Normalized {
  Matrix matrix;
  NormalizationStats stats;
};
// Needs at least two rows.
Normalized normalize(const Matrix& train);

// Sorted distinct values.
std::vector<std::string> build_vocabulary(std::span<const std::string> values);
// One indicator per vocabulary entry; unseen values give all zeros.
std::vector<double> encode_categorical(const std::string& value,
                                       std::span<const std::string> vocabulary);

// Training-time feature pipeline: min-max scaling of numeric features plus
// one-hot prompt and L1 blocks.
class Preprocessor {
 public:
  Preprocessor() = default;

  static Preprocessor fit(const FeatureMatrix& train);
  Matrix transform(const FeatureMatrix& data) const;
  std::vector<std::string> expanded_names() const;
  std::size_t dimension() const;

  const FeatureProfile& profile() const { return profile_; }
  const NormalizationStats& stats() const { return stats_; }
  const std::vector<std::string>& prompt_vocabulary() const { return prompts_; }
  const std::vector<std::string>& l1_vocabulary() const { return l1s_; }

  nlohmann::json to_json() const;
  static Preprocessor from_json(const nlohmann::json& j);

 private:
  FeatureProfile profile_;
  NormalizationStats stats_;
  std::vector<std::string> prompts_;
  std::vector<std::string> l1s_;
};

// CSV with a header row: id, features, expanded categorical columns, gold.
// Row-major flags for the cells holding imputed values; these stay out of
// the normalization statistics.
std::vector<bool> imputed_mask(const FeatureMatrix& m);

void write_feature_csv(std::ostream& out, const FeatureMatrix& m);
nlohmann::json feature_sidecar(const FeatureMatrix& m, std::uint64_t seed);

std::string format_double(double v);

}  // namespace aes
