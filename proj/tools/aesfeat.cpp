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

// Command-line front end: corpus -> features -> models -> reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aes/annotate.hpp"
#include "aes/discfeat.hpp"
#include "aes/errfeat.hpp"
#include "aes/errors.hpp"
#include "aes/evaluate.hpp"
#include "aes/learn.hpp"
#include "aes/vector.hpp"
#include "json.hpp"

namespace {

using namespace aes;

struct RunConfig {
  std::string corpus;
  std::string profile = "paper-114";
  std::string task = "classify";
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::string model;
  std::string out;
  std::string dictionary;
  std::string connectives;
  std::size_t k_neighbors = 10;
  double C = 1.0;
  double epsilon = 0.001;
  double tolerance = 0.001;
  double gap_tolerance = 1e-6;
  bool serial = false;

  SmoOptions smo() const {
    SmoOptions o;
    o.C = C;
    o.epsilon = epsilon;
    o.tolerance = tolerance;
    o.gap_tolerance = gap_tolerance;
    o.seed = seed;
    return o;
  }
  Execution exec() const { return serial ? Execution::serial : Execution::parallel; }

  nlohmann::json metadata(const std::string& subcommand) const {
    return {{"subcommand", subcommand}, {"corpus", corpus},     {"profile", profile},
            {"task", task},             {"folds", folds},       {"seed", seed},
            {"k_neighbors", k_neighbors}, {"C", C},             {"epsilon", epsilon},
            {"tolerance", tolerance},   {"gap_tolerance", gap_tolerance},
            {"dictionary", dictionary},
            {"connectives", connectives}};
  }
};

// Owns the optional resources handed to the extractor.
struct Resources {
  std::optional<ConnectiveLexicon> lexicon;
  std::optional<Dictionary> dictionary;

  explicit Resources(const RunConfig& cfg) {
    if (!cfg.connectives.empty()) lexicon = ConnectiveLexicon::load(cfg.connectives);
    if (!cfg.dictionary.empty()) dictionary = Dictionary::load(cfg.dictionary);
  }

  FeatureExtractor extractor() const {
    ExtractionResources r;
    if (lexicon) r.connectives = &*lexicon;
    if (dictionary) r.dictionary = &*dictionary;
    return FeatureExtractor(r);
  }
};

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw ConfigError("missing required flag " + flag);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  open_out(path) << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

FeatureMatrix extract(const RunConfig& cfg, const FeatureProfile& profile) {
  require(cfg.corpus, "--corpus");
  const Resources res(cfg);
  const FeatureExtractor ex = res.extractor();
  ex.check_resources(profile);
  const std::vector<EssayDoc> docs = load_corpus(cfg.corpus);
  return extract_corpus(docs, profile, ex, cfg.exec());
}

void sort_by_id(FeatureMatrix& m) {
  std::sort(m.rows.begin(), m.rows.end(),
            [](const FeatureVector& a, const FeatureVector& b) { return a.id < b.id; });
}

int cmd_extract(const RunConfig& cfg) {
  require(cfg.out, "--out");
  FeatureMatrix m = extract(cfg, builtin_profile(cfg.profile));
  sort_by_id(m);
  {
    auto out = open_out(cfg.out);
    write_feature_csv(out, m);
  }
  nlohmann::json side = feature_sidecar(m, cfg.seed);
  side["run"] = cfg.metadata("extract");
  write_json(cfg.out + ".json", side);
  std::size_t imputed = 0;
  for (const FeatureVector& v : m.rows) imputed += v.imputed.empty() ? 0 : 1;
  std::cerr << "extracted " << m.rows.size() << " essays x " << m.profile.features.size()
            << " features";
  if (imputed) std::cerr << " (" << imputed << " essays with imputed values, see sidecar)";
  std::cerr << '\n';
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  require(cfg.model, "--model");
  const Task task = parse_task(cfg.task);
  const FeatureMatrix m = extract(cfg, builtin_profile(cfg.profile));
  const LinearModel model = train_model(m, task, cfg.smo(), cfg.exec());
  nlohmann::json j = model.to_json();
  j["run"] = cfg.metadata("train");
  write_json(cfg.model, j);
  bool kkt_ok = true;
  if (task == Task::classification) {
    for (const auto& pm : model.classifier.machines) kkt_ok = kkt_ok && pm.machine.kkt.ok;
  } else {
    kkt_ok = model.regressor.kkt.ok;
  }
  std::cerr << "trained " << to_string(task) << " model on " << m.rows.size() << " essays"
            << (kkt_ok ? "" : " (warning: KKT conditions not met within tolerance)") << '\n';
  return 0;
}

LinearModel load_model(const RunConfig& cfg) {
  require(cfg.model, "--model");
  return LinearModel::from_json(read_json(cfg.model));
}

int cmd_predict(const RunConfig& cfg) {
  require(cfg.out, "--out");
  const LinearModel model = load_model(cfg);
  FeatureMatrix m = extract(cfg, model.preprocessor.profile());
  sort_by_id(m);
  auto out = open_out(cfg.out);
  out << "id,prediction\n";
  if (model.task == Task::classification) {
    const auto pred = model.predict_labels(m);
    for (std::size_t i = 0; i < pred.size(); ++i) out << m.rows[i].id << ',' << to_string(pred[i]) << '\n';
  } else {
    const auto pred = model.predict_scores(m);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      out << m.rows[i].id << ',' << format_double(pred[i]) << '\n';
    }
  }
  return 0;
}

void write_report(const RunConfig& cfg, const std::string& sub, nlohmann::json j,
                  const std::string& text) {
  j["run"] = cfg.metadata(sub);
  std::cout << text;
  if (!cfg.out.empty()) {
    write_json(cfg.out, j);
    open_out(cfg.out + ".txt") << text;
  }
}

int cmd_crossval(const RunConfig& cfg) {
  const Task task = parse_task(cfg.task);
  const FeatureMatrix m = extract(cfg, builtin_profile(cfg.profile));
  const CrossValidation cv = cross_validate(m, task, cfg.folds, cfg.seed, cfg.smo(), cfg.exec());
  nlohmann::json j;
  j["pooled"] = report_to_json(cv.pooled);
  j["folds"] = nlohmann::json::array();
  for (const EvalReport& r : cv.folds) j["folds"].push_back(report_to_json(r));
  std::string text = report_to_text(cv.pooled) + "\n" +
                     summary_table({{cfg.profile, cv.pooled}});
  write_report(cfg, "crossval", j, text);
  return 0;
}

int cmd_relieff(const RunConfig& cfg) {
  require(cfg.out, "--out");
  const Task task = parse_task(cfg.task);
  const FeatureMatrix m = extract(cfg, builtin_profile(cfg.profile));
  const FeatureRanking ranking = relieff(m, task, cfg.k_neighbors, cfg.exec());
  auto out = open_out(cfg.out);
  out << "# " << cfg.metadata("relieff").dump() << '\n';
  out << "feature\tweight\n";
  for (const auto& [name, w] : ranking.entries) out << name << '\t' << format_double(w) << '\n';
  return 0;
}

int cmd_balance(const RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  require(cfg.out, "--out");
  const std::vector<EssayDoc> docs = load_corpus(cfg.corpus);
  std::vector<std::optional<Proficiency>> labels;
  for (const EssayDoc& d : docs) labels.push_back(d.label);
  const std::vector<std::size_t> keep = subsample_balance(labels, cfg.seed);
  std::vector<EssayDoc> kept;
  for (std::size_t i : keep) kept.push_back(docs[i]);
  {
    auto out = open_out(cfg.out);
    write_corpus(out, kept);
  }
  nlohmann::json meta = {{"run", cfg.metadata("balance")},
                         {"input_rows", docs.size()},
                         {"kept_rows", kept.size()}};
  write_json(cfg.out + ".json", meta);
  std::cerr << "kept " << kept.size() << " of " << docs.size() << " essays\n";
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  const LinearModel model = load_model(cfg);
  const std::vector<std::string> names = model.preprocessor.expanded_names();
  nlohmann::json j;
  std::ostringstream text;

  // Classification weights come from the low-vs-high machine when present,
  // otherwise from the first machine.
  const LinearMachine* machine = &model.regressor;
  std::string machine_name = "regressor";
  if (model.task == Task::classification) {
    const auto& ms = model.classifier.machines;
    auto it = std::find_if(ms.begin(), ms.end(), [](const PairwiseMachine& pm) {
      return pm.first == Proficiency::low && pm.second == Proficiency::high;
    });
    if (it == ms.end()) it = ms.begin();
    machine = &it->machine;
    machine_name = std::string(to_string(it->first)) + "-vs-" + std::string(to_string(it->second));
  }
  const WeightReport wr = weight_report(names, machine->weights, 5);
  auto entries = [](const std::vector<WeightEntry>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const WeightEntry& e : v) {
      a.push_back({{"feature", e.feature}, {"weight", e.weight},
                   {"discriminative", e.discriminative}});
    }
    return a;
  };
  j["weights"] = {{"machine", machine_name},
                  {"positive", entries(wr.positive)},
                  {"negative", entries(wr.negative)}};
  text << "weights (" << machine_name << ")\n";
  const std::size_t rows = std::max(wr.positive.size(), wr.negative.size());
  for (std::size_t i = 0; i < rows; ++i) {
    char buf[256];
    const WeightEntry* p = i < wr.positive.size() ? &wr.positive[i] : nullptr;
    const WeightEntry* q = i < wr.negative.size() ? &wr.negative[i] : nullptr;
    std::snprintf(buf, sizeof buf, "  %+8.3f  %-34s %+8.3f  %s\n", p ? p->weight : 0.0,
                  p ? p->feature.c_str() : "", q ? q->weight : 0.0, q ? q->feature.c_str() : "");
    text << buf;
  }

  if (!cfg.corpus.empty()) {
    FeatureMatrix m = extract(cfg, model.preprocessor.profile());
    EvalReport r;
    if (model.task == Task::classification) {
      r = classification_report(model.predict_labels(m), class_labels(m));
    } else {
      r = regression_report(model.predict_scores(m), regression_targets(m));
    }
    j["evaluation"] = report_to_json(r);
    text << '\n' << report_to_text(r);
  }
  write_report(cfg, "report", j, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linguistic feature extraction and proficiency models for learner essays"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--corpus", cfg.corpus, "Corpus file (JSON lines)");
    sub->add_option("--profile", cfg.profile, "Feature profile")->capture_default_str();
    sub->add_option("--dictionary", cfg.dictionary, "Word list for the fallback error checker");
    sub->add_option("--connectives", cfg.connectives, "Connective lexicon (TSV)");
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output path");
    sub->add_flag("--serial", cfg.serial, "Run the serial reference path");
  };
  auto add_learning = [&](CLI::App* sub) {
    sub->add_option("--task", cfg.task, "classify or regress")->capture_default_str();
    sub->add_option("--C", cfg.C, "Soft-margin penalty")->capture_default_str();
    sub->add_option("--epsilon", cfg.epsilon, "Insensitive-tube width")->capture_default_str();
    sub->add_option("--tolerance", cfg.tolerance, "KKT tolerance")->capture_default_str();
    sub->add_option("--gap-tolerance", cfg.gap_tolerance, "Bound on the dual objective gap")
        ->capture_default_str();
  };

  auto* extract_cmd = app.add_subcommand("extract", "Write the feature matrix as CSV + sidecar JSON");
  add_common(extract_cmd);
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  add_common(train_cmd);
  add_learning(train_cmd);
  train_cmd->add_option("--model", cfg.model, "Model output path");
  auto* predict_cmd = app.add_subcommand("predict", "Predict with a trained model");
  add_common(predict_cmd);
  predict_cmd->add_option("--model", cfg.model, "Model path");
  auto* cv_cmd = app.add_subcommand("crossval", "k-fold cross-validation");
  add_common(cv_cmd);
  add_learning(cv_cmd);
  cv_cmd->add_option("--folds", cfg.folds, "Number of folds")->capture_default_str();
  auto* relieff_cmd = app.add_subcommand("relieff", "Rank features with ReliefF / RReliefF");
  add_common(relieff_cmd);
  relieff_cmd->add_option("--task", cfg.task, "classify or regress")->capture_default_str();
  relieff_cmd->add_option("--k-neighbors", cfg.k_neighbors, "Neighbours")->capture_default_str();
  auto* balance_cmd = app.add_subcommand("balance", "Downsample classes to the minority count");
  add_common(balance_cmd);
  auto* report_cmd = app.add_subcommand("report", "Weight report and optional evaluation");
  add_common(report_cmd);
  report_cmd->add_option("--model", cfg.model, "Model path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*extract_cmd) return cmd_extract(cfg);
    if (*train_cmd) return cmd_train(cfg);
    if (*predict_cmd) return cmd_predict(cfg);
    if (*cv_cmd) return cmd_crossval(cfg);
    if (*relieff_cmd) return cmd_relieff(cfg);
    if (*balance_cmd) return cmd_balance(cfg);
    if (*report_cmd) return cmd_report(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
