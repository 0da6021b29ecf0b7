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

#include <doctest.h>

#include <cmath>
#include <random>

#include "aes/evaluate.hpp"
#include "testing.hpp"

using namespace aes;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

// Residuals of v after an ordinary least-squares fit on z with intercept.
std::vector<double> residuals(const std::vector<double>& v, const std::vector<double>& z) {
  const double mv = mean(v), mz = mean(z);
  double szz = 0, szv = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    szz += (z[i] - mz) * (z[i] - mz);
    szv += (z[i] - mz) * (v[i] - mv);
  }
  const double slope = szv / szz, icept = mv - slope * mz;
  std::vector<double> r;
  for (std::size_t i = 0; i < v.size(); ++i) r.push_back(v[i] - (icept + slope * z[i]));
  return r;
}

double corr(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a), mb = mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("oracle: partial correlation equals the residual correlation") {
  testing::Rng rng(41);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + rng() % 60;
    const double a = g(rng), b = g(rng);
    std::vector<double> x, y, z;
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = g(rng);
      z.push_back(zi);
      x.push_back(a * zi + g(rng));
      y.push_back(b * zi + 0.5 * x.back() + g(rng));
    }
    CHECK(std::abs(partial_correlation(x, y, z) - corr(residuals(x, z), residuals(y, z))) <= 1e-9);
  }
}

TEST_CASE("oracle: MAE equals direct re-summation") {
  testing::Rng rng(42);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(g(rng));
      b.push_back(g(rng));
    }
    double s = 0;
    for (std::size_t i = n; i-- > 0;) s += std::abs(a[i] - b[i]);
    CHECK(mae(a, b) == doctest::Approx(s / double(n)).epsilon(1e-12));
  }
}

}  // TEST_SUITE
