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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aes/annotate.hpp"
#include "aes/evaluate.hpp"
#include "aes/matrix.hpp"
#include "aes/parallel.hpp"
#include "aes/vector.hpp"
#include "json.hpp"

namespace aes {

struct SmoOptions {
  double C = 1.0;
  double epsilon = 0.001;    // width of the insensitive tube (regression only)
  double tolerance = 0.001;  // stop once the maximal KKT violation is below this
  // ...and the duality-gap bound on the objective's distance from the optimum
  // is below this.
  double gap_tolerance = 1e-6;
  std::uint64_t seed = 1;
  std::size_t max_iterations = 0;  // 0 picks max(10^7, 100 n)

  void check() const;
};

// Dual problem in the form
//   min_b  0.5 b'Qb + p'b   s.t.  y'b = 0,  0 <= b <= C,
// with Q_ij = y_i y_j K(x_i, x_j) and K the linear kernel.
struct DualProblem {
  std::vector<double> y;        // +1 / -1 per variable
  std::vector<double> p;        // linear term
  std::vector<std::size_t> row; // data row behind each variable
  double C = 1.0;
};

DualProblem svc_problem(std::span<const double> labels, double C);
DualProblem svr_problem(std::span<const double> targets, double C, double epsilon);

struct DualSolution {
  std::vector<double> beta;
  std::vector<double> gradient;  // Q beta + p
  double rho = 0;                // decision offset; bias = -rho
  double objective = 0;
  double gap = 0;                // certified bound on objective - optimum
  std::size_t iterations = 0;
  bool converged = false;
};

// Gram matrix of the rows of X; each entry is one dot product, so the
// serial and parallel results are identical.
Matrix gram_matrix(const Matrix& X, Execution exec = Execution::parallel);

// Working-set selection uses second-order information (the LIBSVM WSS2
// rule). Single-threaded once the Gram matrix is built.
DualSolution solve_dual(const DualProblem& problem, const Matrix& gram, double tolerance,
                        double gap_tolerance = 1e-6, std::size_t max_iterations = 0);

double dual_objective(const DualProblem& problem, const Matrix& gram,
                      std::span<const double> beta);

struct KktReport {
  double bound_violation = 0;     // distance of the worst beta from [0, C]
  double equality_residual = 0;   // |y'beta|
  double max_violation = 0;       // m(beta) - M(beta), the stopping gap
  double slackness_residual = 0;  // worst per-sample complementary slackness
  bool ok = false;
};

// Complementary slackness is measured against the decision values
// f(x_i) = sum_j coef_j K_ij - rho.
KktReport kkt_check(const DualProblem& problem, const Matrix& gram,
                    std::span<const double> beta, double rho, double tolerance);

struct LinearMachine {
  std::vector<double> weights;
  double bias = 0;
  double objective = 0;
  std::size_t iterations = 0;
  std::vector<double> beta;
  KktReport kkt;

  double decision(std::span<const double> x) const { return dot(weights, x) + bias; }
};

// labels are +1 / -1.
LinearMachine train_svc(const Matrix& X, std::span<const double> labels, const SmoOptions& opt,
                        Execution exec = Execution::parallel);
LinearMachine train_svr(const Matrix& X, std::span<const double> targets, const SmoOptions& opt,
                        Execution exec = Execution::parallel);

struct PairwiseMachine {
  Proficiency first;   // decision > 0 votes for first
  Proficiency second;
  LinearMachine machine;
};

// Pairwise (one-vs-one) classifier over the classes present, in the fixed
// order low, medium, high. Vote ties go to the lowest class.
struct PairwiseClassifier {
  std::vector<Proficiency> classes;
  std::vector<PairwiseMachine> machines;

  Proficiency predict(std::span<const double> x) const;
};

// Throws ValidationError (degenerate model) when fewer than two classes occur.
PairwiseClassifier train_pairwise(const Matrix& X, std::span<const Proficiency> labels,
                                  const SmoOptions& opt, Execution exec = Execution::parallel);

struct LinearModel {
  static constexpr int kFormatVersion = 1;

  Task task = Task::classification;
  Preprocessor preprocessor;
  SmoOptions options;
  PairwiseClassifier classifier;  // classification
  LinearMachine regressor;        // regression

  std::vector<Proficiency> predict_labels(const FeatureMatrix& data) const;
  std::vector<double> predict_scores(const FeatureMatrix& data) const;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

// Regression target: the row's score, or the label's ordinal index
// (low 0, medium 1, high 2) when there is no score.
std::vector<double> regression_targets(const FeatureMatrix& data);
std::vector<Proficiency> class_labels(const FeatureMatrix& data);

// Fit the preprocessor on `train`, then train. Rows need labels
// (classification) or a score or label (regression).
LinearModel train_classifier(const FeatureMatrix& train, const SmoOptions& opt,
                             Execution exec = Execution::parallel);
LinearModel train_regressor(const FeatureMatrix& train, const SmoOptions& opt,
                            Execution exec = Execution::parallel);
LinearModel train_model(const FeatureMatrix& train, Task task, const SmoOptions& opt,
                        Execution exec = Execution::parallel);

// Fold index per row. Classification folds are stratified: each class is
// shuffled and dealt round-robin, the deal continuing across classes.
std::vector<std::size_t> fold_assignment(const FeatureMatrix& data, Task task, std::size_t folds,
                                         std::uint64_t seed);

struct CrossValidation {
  EvalReport pooled;               // predictions of all folds together
  std::vector<EvalReport> folds;
  std::vector<std::size_t> assignment;
  std::vector<Proficiency> predicted_labels;
  std::vector<double> predicted_scores;
};

// Normalization and vocabularies are refit inside every training fold.
// Throws ConfigError when folds < 2 or folds > rows.
CrossValidation cross_validate(const FeatureMatrix& data, Task task, std::size_t folds,
                               std::uint64_t seed, const SmoOptions& opt,
                               Execution exec = Execution::parallel);

struct FeatureRanking {
  std::vector<std::pair<std::string, double>> entries;  // non-increasing weight
};

// Attribute table for the Relief estimators: numeric columns are min-max
// scaled internally; categorical columns hold category codes and diff 0/1.
struct ReliefData {
  Matrix X;
  std::vector<bool> categorical;
  std::vector<std::string> names;
};

ReliefData relief_data(const FeatureMatrix& data);

// ReliefF with k nearest hits and k nearest misses from every other class
// (misses weighted by class prior), all rows used as samples, Manhattan
// distance, ties broken by row index. Throws ConfigError when rows <= k.
std::vector<double> relieff_weights(const ReliefData& data, std::span<const Proficiency> labels,
                                    std::size_t k = 10, Execution exec = Execution::parallel);
// RReliefF for a numeric target with uniform neighbour weights 1/k.
std::vector<double> rrelieff_weights(const ReliefData& data, std::span<const double> targets,
                                     std::size_t k = 10, Execution exec = Execution::parallel);

FeatureRanking rank_features(std::span<const std::string> names, std::span<const double> weights);
FeatureRanking relieff(const FeatureMatrix& data, Task task, std::size_t k = 10,
                       Execution exec = Execution::parallel);

// Indices of the rows kept after downsampling every class without
// replacement to the minority count, in original order. Throws ConfigError
// when a label is missing.
std::vector<std::size_t> subsample_balance(std::span<const std::optional<Proficiency>> labels,
                                           std::uint64_t seed);

}  // namespace aes
