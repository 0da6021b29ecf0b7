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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "aes/annotate.hpp"
#include "aes/learn.hpp"
#include "aes/matrix.hpp"

// Shared helpers for the unit, oracle, property and acceptance suites.
namespace aes::testing {

using Rng = std::mt19937_64;

// Essay whose token layer is read off the leaves of the given bracket strings.
EssayDoc doc_from_parses(const std::string& id, const std::vector<std::string>& parses);

// Random well-formed PTB sentence tree (ROOT-rooted) over a small vocabulary,
// so overlap and coreference-like repetition is common.
std::string random_parse(Rng& rng);

// Random fully annotated essay: parses, lemmas and stems on some tokens,
// chains, errors, and connective annotations on some sentences.
EssayDoc random_doc(Rng& rng, const std::string& id, std::size_t min_sentences = 1,
                    std::size_t max_sentences = 6);

// Random token stream over a vocabulary of `vocab` words.
std::vector<std::string> random_words(Rng& rng, std::size_t n, std::size_t vocab);

// Essays whose label is a threshold function of a latent proficiency z in
// [0, 3): z drives sentence complexity, vocabulary size, modifier use and
// error rate. `per_class` essays are drawn for each of low, medium, high.
std::vector<EssayDoc> synthetic_corpus(std::size_t per_class, std::uint64_t seed);

// Minimum of 0.5 b'Qb + p'b over the dual feasible set, by a primal-dual
// interior-point method on dense matrices. Independent of the SMO solver.
double qp_oracle_objective(const DualProblem& problem, const Matrix& gram);

// Locations baked in at configure time.
std::filesystem::path source_dir();
std::filesystem::path aesfeat_path();

// Runs a shell command; returns the exit status.
int run(const std::string& command);
std::string read_file(const std::filesystem::path& path);

}  // namespace aes::testing
