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

#include "aes/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aes/errors.hpp"

namespace aes {
namespace {

void require_same_length(std::size_t a, std::size_t b, std::size_t min_len) {
  if (a != b) {
    throw ValidationError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
  if (a < min_len) {
    throw ValidationError("need at least " + std::to_string(min_len) + " values");
  }
}

double mean(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string_view to_string(Task t) {
  return t == Task::classification ? "classification" : "regression";
}

Task parse_task(std::string_view s) {
  if (s == "classify" || s == "classification") return Task::classification;
  if (s == "regress" || s == "regression") return Task::regression;
  throw ConfigError("unknown task '" + std::string(s) + "' (expected classify or regress)");
}

EvalReport classification_report(std::span<const Proficiency> predicted,
                                 std::span<const Proficiency> gold) {
  require_same_length(predicted.size(), gold.size(), 1);
  EvalReport r;
  r.task = Task::classification;
  r.n = gold.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = static_cast<std::size_t>(gold[i]);
    const auto p = static_cast<std::size_t>(predicted[i]);
    ++r.confusion[g][p];
    if (g == p) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::size_t gold_c = 0, pred_c = 0;
    for (std::size_t o = 0; o < kNumClasses; ++o) {
      gold_c += r.confusion[c][o];
      pred_c += r.confusion[o][c];
    }
    if (pred_c) r.precision[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(pred_c);
    if (gold_c) r.recall[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(gold_c);
  }
  return r;
}

EvalReport regression_report(std::span<const double> predicted, std::span<const double> gold) {
  require_same_length(predicted.size(), gold.size(), 1);
  EvalReport r;
  r.task = Task::regression;
  r.n = gold.size();
  r.mae = mae(predicted, gold);
  if (r.n >= 2) {
    try {
      r.pearson = pearson(predicted, gold);
    } catch (const UndefinedInputError&) {
    }
  }
  return r;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), 2);
  const double ma = mean(a), mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0) || !(sbb > 0)) throw UndefinedInputError("correlation with a constant input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double mae(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), 1);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double partial_correlation(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z) {
  require_same_length(x.size(), y.size(), 3);
  require_same_length(x.size(), z.size(), 3);
  const double rxy = pearson(x, y);
  const double rxz = pearson(x, z);
  const double ryz = pearson(y, z);
  const double denom = (1 - rxz * rxz) * (1 - ryz * ryz);
  if (!(denom > 0)) throw UndefinedInputError("partial correlation: control is collinear");
  return std::clamp((rxy - rxz * ryz) / std::sqrt(denom), -1.0, 1.0);
}

WeightReport weight_report(std::span<const std::string> names, std::span<const double> weights,
                           std::size_t top_k) {
  require_same_length(names.size(), weights.size(), 0);
  std::vector<WeightEntry> pos, neg, zero;
  for (std::size_t i = 0; i < names.size(); ++i) {
    WeightEntry e{names[i], weights[i], weights[i] != 0.0};
    if (weights[i] > 0) pos.push_back(e);
    else if (weights[i] < 0) neg.push_back(e);
    else zero.push_back(e);
  }
  std::sort(pos.begin(), pos.end(), [](const WeightEntry& a, const WeightEntry& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.feature < b.feature;
  });
  std::sort(neg.begin(), neg.end(), [](const WeightEntry& a, const WeightEntry& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.feature < b.feature;
  });
  std::sort(zero.begin(), zero.end(),
            [](const WeightEntry& a, const WeightEntry& b) { return a.feature < b.feature; });
  auto finish = [&](std::vector<WeightEntry> v) {
    if (v.empty()) v = zero;
    if (v.size() > top_k) v.resize(top_k);
    return v;
  };
  return {finish(std::move(pos)), finish(std::move(neg))};
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["task"] = to_string(r.task);
  j["n"] = r.n;
  if (r.task == Task::classification) {
    j["classes"] = {"low", "medium", "high"};
    j["accuracy"] = r.accuracy;
    j["confusion"] = r.confusion;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
  } else {
    j["pearson"] = r.pearson ? nlohmann::json(*r.pearson) : nlohmann::json(nullptr);
    j["mae"] = r.mae ? nlohmann::json(*r.mae) : nlohmann::json(nullptr);
  }
  return j;
}

std::string report_to_text(const EvalReport& r) {
  std::ostringstream out;
  out << "task: " << to_string(r.task) << "  n: " << r.n << '\n';
  if (r.task == Task::regression) {
    out << "pearson: " << (r.pearson ? fixed(*r.pearson, 4) : "undefined") << '\n';
    out << "mae:     " << (r.mae ? fixed(*r.mae, 4) : "undefined") << '\n';
    return out.str();
  }
  out << "accuracy: " << fixed(100 * r.accuracy, 1) << "%\n\n";
  const char* names[] = {"low", "medium", "high"};
  out << pad("gold \\ pred", 12);
  for (const char* n : names) out << pad(n, 8);
  out << pad("prec", 8) << "recall\n";
  for (std::size_t g = 0; g < kNumClasses; ++g) {
    out << pad(names[g], 12);
    for (std::size_t p = 0; p < kNumClasses; ++p) out << pad(std::to_string(r.confusion[g][p]), 8);
    out << pad(fixed(r.precision[g], 3), 8) << fixed(r.recall[g], 3) << '\n';
  }
  return out.str();
}

std::string summary_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t width = 14;
  for (const auto& [label, _] : rows) width = std::max(width, label.size() + 2);
  std::ostringstream out;
  out << pad("Feature Group", width) << pad("n", 7) << pad("Accuracy", 10) << pad("Pearson", 9)
      << "MAE\n";
  for (const auto& [label, r] : rows) {
    out << pad(label, width) << pad(std::to_string(r.n), 7);
    out << pad(r.task == Task::classification ? fixed(100 * r.accuracy, 1) + "%" : "-", 10);
    out << pad(r.pearson ? fixed(*r.pearson, 2) : "-", 9);
    out << (r.mae ? fixed(*r.mae, 2) : "-") << '\n';
  }
  return out.str();
}

}  // namespace aes
