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

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace aes {

// Every data-parallel kernel in the library takes an Execution switch. The
// serial path is the reference; the OpenMP path must produce bitwise
// identical results, which holds because each iteration writes only its own
// output slot and reductions are done afterwards in index order.
enum class Execution { serial, parallel };

// Runs body(i) for i in [0, n). Exceptions are collected per iteration and
// the one from the lowest index is rethrown, so failures are deterministic.
template <typename Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace aes
