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

// Serial reference vs OpenMP path for each data-parallel kernel. The first
// benchmark argument selects the path (0 serial, 1 parallel).
#include <benchmark/benchmark.h>

#include "aes/discfeat.hpp"
#include "aes/learn.hpp"
#include "aes/vector.hpp"
#include "testing.hpp"

using namespace aes;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

const std::vector<EssayDoc>& corpus() {
  static const std::vector<EssayDoc> docs = testing::synthetic_corpus(100, 1);
  return docs;
}

const ConnectiveLexicon& lexicon() {
  static const ConnectiveLexicon lex =
      ConnectiveLexicon::load(testing::source_dir() / "resources" / "connectives.tsv");
  return lex;
}

const FeatureMatrix& features() {
  static const FeatureMatrix fm =
      extract_corpus(corpus(), builtin_profile("paper-114"), FeatureExtractor({&lexicon(), nullptr}));
  return fm;
}

void BM_Extract(benchmark::State& state) {
  const FeatureExtractor ex({&lexicon(), nullptr});
  const FeatureProfile p = builtin_profile("paper-114");
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_corpus(corpus(), p, ex, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(corpus().size()));
}

void BM_Gram(benchmark::State& state) {
  const Matrix X = Preprocessor::fit(features()).transform(features());
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(X, exec_of(state)));
}

void BM_ReliefF(benchmark::State& state) {
  const ReliefData rd = relief_data(features());
  const auto labels = class_labels(features());
  for (auto _ : state) benchmark::DoNotOptimize(relieff_weights(rd, labels, 10, exec_of(state)));
}

void BM_CrossValidate(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cross_validate(features(), Task::classification, 10, 7, SmoOptions{}, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_Extract)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReliefF)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
