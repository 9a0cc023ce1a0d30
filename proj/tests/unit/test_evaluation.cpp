/*
 * Copyright 2026 The gaugeblend Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "fixtures.hpp"
#include "gaugeblend/error.hpp"
#include "gaugeblend/evaluation.hpp"

using namespace gaugeblend;
using gaugeblend::testing::random_vector;
using gaugeblend::testing::relative_error;

namespace {

// Naive oracles: plain loops in long double, full sort for the median.
double naive_mse(const std::vector<double>& p, const std::vector<double>& t) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double d = static_cast<long double>(p[i]) - t[i];
    s += d * d;
  }
  return static_cast<double>(s / p.size());
}

double naive_mdse(const std::vector<double>& p, const std::vector<double>& t) {
  std::vector<double> e;
  for (std::size_t i = 0; i < p.size(); ++i) e.push_back((p[i] - t[i]) * (p[i] - t[i]));
  std::sort(e.begin(), e.end());
  const std::size_t n = e.size();
  return n % 2 == 1 ? e[n / 2] : (e[n / 2 - 1] + e[n / 2]) / 2.0;
}

}  // namespace

TEST_CASE("squared_error hand values") {
  CHECK(squared_error(3.0, 3.0) == 0.0);
  CHECK(squared_error(5.0, 2.0) == 9.0);
  CHECK(squared_error(2.0, 5.0) == 9.0);
  CHECK_THROWS_AS(squared_error(std::nan(""), 1.0), ValidationError);
}

TEST_CASE("mse hand values and errors") {
  const std::vector<double> a{1.0, 3.0}, b{2.0, 5.0};
  CHECK(mse(a, b) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(mse(b, b) == 0.0);
  CHECK_THROWS_AS(mse(std::vector<double>{1.0}, b), ValidationError);
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), ValidationError);
}

TEST_CASE("mse of the mean prediction is the population variance") {
  Rng rng(11);
  const auto truth = random_vector(501, rng, 0.0, 50.0);
  long double mean = 0.0L;
  for (double v : truth) mean += v;
  mean /= truth.size();
  long double var = 0.0L;
  for (double v : truth) var += (v - mean) * (v - mean);
  var /= truth.size();
  const std::vector<double> pred(truth.size(), static_cast<double>(mean));
  CHECK(relative_error(mse(pred, truth), static_cast<double>(var)) < 1e-12);
}

TEST_CASE("mdse hand values") {
  // errors^2 (0, 0, 100)
  CHECK(mdse(std::vector<double>{0.0, 0.0, 10.0}, std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
  // errors^2 (1, 4, 9, 16): midpoint of 4 and 9
  CHECK(mdse(std::vector<double>{1.0, 2.0, 3.0, 4.0}, std::vector<double>{0.0, 0.0, 0.0, 0.0}) ==
        6.5);
  const std::vector<double> v{1.0, 2.0};
  CHECK(mdse(v, v) == 0.0);
}

TEST_CASE("mse and mdse match naive loops on random vectors") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(200);
    const auto p = random_vector(n, rng, -100.0, 100.0);
    const auto t = random_vector(n, rng, -100.0, 100.0);
    CHECK(relative_error(mse(p, t), naive_mse(p, t)) <= 1e-12);
    CHECK(relative_error(mdse(p, t), naive_mdse(p, t)) <= 1e-12);
  }
}

TEST_CASE("mse and mdse have no fixed ordering") {
  // One large error: mse > mdse.
  CHECK(mse(std::vector<double>{0, 0, 10}, std::vector<double>{0, 0, 0}) >
        mdse(std::vector<double>{0, 0, 10}, std::vector<double>{0, 0, 0}));
  // Errors (0, 3, 3): mse = 6 < mdse = 9.
  CHECK(mse(std::vector<double>{0, 3, 3}, std::vector<double>{0, 0, 0}) <
        mdse(std::vector<double>{0, 3, 3}, std::vector<double>{0, 0, 0}));
}

TEST_CASE("skill_score hand values") {
  CHECK(skill_score(50.0, 100.0) == 50.0);
  CHECK(skill_score(100.0, 100.0) == 0.0);
  CHECK(skill_score(150.0, 100.0) == -50.0);
  CHECK_THROWS_AS(skill_score(1.0, 0.0), NumericError);
}

TEST_CASE("skill_score is zero against itself and strictly decreasing") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double m = rng.uniform(1e-6, 1e6);
    CHECK(skill_score(m, m) == 0.0);
    const double a = rng.uniform(0.0, 2.0 * m);
    const double b = a + rng.uniform(1e-3, 1.0) * m;
    CHECK(skill_score(a, m) > skill_score(b, m));
  }
}

TEST_CASE("median convention") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), ValidationError);
}

TEST_CASE("rank_learners strict and tied") {
  auto r = rank_learners({{"A", 1.0}, {"B", 2.0}, {"C", 3.0}}, Direction::LowerIsBetter);
  CHECK(r == std::map<std::string, int>{{"A", 1}, {"B", 2}, {"C", 3}});
  r = rank_learners({{"A", 1.0}, {"B", 1.0}, {"C", 3.0}}, Direction::LowerIsBetter);
  CHECK(r == std::map<std::string, int>{{"A", 1}, {"B", 1}, {"C", 3}});
  r = rank_learners({{"A", 1.0}, {"B", 2.0}}, Direction::HigherIsBetter);
  CHECK(r.at("B") == 1);
  CHECK_THROWS_AS(
      rank_learners({{"A", std::numeric_limits<double>::infinity()}}, Direction::LowerIsBetter),
      ValidationError);
  CHECK_THROWS_AS(rank_learners({}, Direction::LowerIsBetter), ValidationError);
}

TEST_CASE("competition ranks agree with a counting oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> m(51);
    for (auto& v : m) v = static_cast<double>(rng.index(20));  // many ties
    const auto ranks = rank_values(m, Direction::LowerIsBetter);
    for (std::size_t i = 0; i < m.size(); ++i) {
      int better = 0;
      for (double w : m) better += w < m[i] ? 1 : 0;
      CHECK(ranks[i] == better + 1);
    }
  }
}

TEST_CASE("ranking by skill score equals ranking by mse for a fixed benchmark") {
  Rng rng(3);
  const auto m = random_vector(17, rng, 1.0, 10.0);
  std::vector<double> rs;
  for (double v : m) rs.push_back(skill_score(v, m[0]));
  CHECK(rank_values(m, Direction::LowerIsBetter) == rank_values(rs, Direction::HigherIsBetter));
}
