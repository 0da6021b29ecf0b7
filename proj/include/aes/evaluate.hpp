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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aes/annotate.hpp"
#include "json.hpp"

namespace aes {

enum class Task { classification, regression };

std::string_view to_string(Task t);
// Accepts "classify"/"classification" and "regress"/"regression".
Task parse_task(std::string_view s);

inline constexpr std::size_t kNumClasses = 3;

struct EvalReport {
  Task task = Task::classification;
  std::size_t n = 0;
  // Classification: confusion[gold][predicted], classes low, medium, high.
  double accuracy = 0;
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
  std::array<double, kNumClasses> precision{};  // 0 when nothing was predicted
  std::array<double, kNumClasses> recall{};     // 0 when the class is absent
  // Regression.
  std::optional<double> pearson;
  std::optional<double> mae;

  bool operator==(const EvalReport&) const = default;
};

// Throws ValidationError on a length mismatch or empty input.
EvalReport classification_report(std::span<const Proficiency> predicted,
                                 std::span<const Proficiency> gold);
// Pearson is left empty when either side is constant.
EvalReport regression_report(std::span<const double> predicted, std::span<const double> gold);

// Throws UndefinedInputError when either input is constant and
// ValidationError on mismatched lengths or fewer than two values.
double pearson(std::span<const double> a, std::span<const double> b);
double mae(std::span<const double> a, std::span<const double> b);

// Correlation of x and y controlling for z. Throws UndefinedInputError when
// z is perfectly correlated with x or y.
double partial_correlation(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z);

struct WeightEntry {
  std::string feature;
  double weight = 0;
  bool discriminative = true;  // false for zero weights used as filler
};

struct WeightReport {
  std::vector<WeightEntry> positive;  // descending
  std::vector<WeightEntry> negative;  // ascending (most negative first)
};

// Ties are broken by feature name. When no weight has the wanted sign the
// list is filled with zero-weight entries flagged non-discriminative.
WeightReport weight_report(std::span<const std::string> names, std::span<const double> weights,
                           std::size_t top_k = 5);

nlohmann::json report_to_json(const EvalReport& r);
std::string report_to_text(const EvalReport& r);

// One row per labelled report, columns depending on the task, aligned.
std::string summary_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace aes
