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
#include <numeric>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gaugeblend/error.hpp"
#include "gaugeblend/importance.hpp"

using namespace gaugeblend;
using gaugeblend::testing::random_matrix;
using gaugeblend::testing::random_vector;

namespace {

std::vector<std::string> names(std::size_t p) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < p; ++j) out.push_back("x" + std::to_string(j + 1));
  return out;
}

RegressorSpec small_forest(std::uint64_t seed) {
  auto spec = RegressorSpec::defaults(Algorithm::RF, seed);
  spec.forest.trees = 60;
  return spec;
}

RegressorSpec small_xgb(std::uint64_t seed) {
  auto spec = RegressorSpec::defaults(Algorithm::XGB, seed);
  spec.xgb.rounds = 30;
  return spec;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("constant model has zero permutation importance") {
  Rng rng(1);
  const Matrix x = random_matrix(80, 3, rng);
  const std::vector<double> y(80, 4.0);
  const auto model = fit(small_forest(1), x, y);
  const auto r = permutation_importance(model, x, y, names(3), 5, 9);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(r.scores[j] == 0.0);
    CHECK(r.raw[j] == 0.0);
    CHECK(r.ranks[j] == 1);
  }
}

TEST_CASE("signal feature beats noise feature") {
  Rng rng(2);
  const std::size_t n = 400;
  Matrix x = random_matrix(n, 2, rng, 0.0, 1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * x(i, 0);
  const auto rf = fit(small_forest(2), x, y);
  const auto perm = permutation_importance(rf, x, y, names(2), 10, 3);
  CHECK(perm.scores[0] > 0.3);  // var(3U) = 0.75; shuffling roughly doubles it
  CHECK(perm.scores[0] > 10.0 * perm.scores[1]);
  CHECK(perm.ranks == std::vector<int>{1, 2});
  CHECK(rank_contributors(perm) == std::vector<std::string>{"x1", "x2"});

  const auto gain = gain_importance(fit(small_xgb(2), x, y), names(2));
  CHECK(gain.method == ImportanceMethod::GainXGB);
  CHECK(gain.scores[0] > 0.9);
  CHECK(std::abs(sum(gain.scores) - 1.0) < 1e-12);
}

TEST_CASE("duplicated column shares credit") {
  Rng rng(3);
  const std::size_t n = 400;
  const auto a = random_vector(n, rng, 0.0, 1.0);
  Matrix x(n, 3);
  x.set_column(0, a);
  x.set_column(1, a);
  x.set_column(2, random_vector(n, rng, 0.0, 1.0));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * a[i];
  const auto gain = gain_importance(fit(small_xgb(3), x, y), names(3));
  CHECK(gain.scores[0] + gain.scores[1] > 0.9);
  // single column model puts all of that credit in one place
  Matrix one(n, 2);
  one.set_column(0, a);
  one.set_column(1, x.column(2));
  const auto solo = gain_importance(fit(small_xgb(3), one, y), names(2));
  CHECK(solo.scores[0] >= gain.scores[0]);
  CHECK(solo.scores[0] >= gain.scores[1]);
}

TEST_CASE("depth-one booster gives its split feature all the gain") {
  Rng rng(4);
  Matrix x = random_matrix(100, 3, rng, 0.0, 1.0);
  std::vector<double> y(100);
  for (std::size_t i = 0; i < 100; ++i) y[i] = x(i, 1) > 0.5 ? 10.0 : 0.0;
  auto spec = small_xgb(4);
  spec.xgb.max_depth = 1;
  spec.xgb.rounds = 1;
  const auto r = gain_importance(fit(spec, x, y), names(3));
  CHECK(r.scores == std::vector<double>{0.0, 1.0, 0.0});
  CHECK(r.ranks[1] == 1);
  CHECK_FALSE(r.no_splits);
}

TEST_CASE("gain fractions sum to one and track effect size") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const std::size_t n = 300;
    Matrix x = random_matrix(n, 4, rng, 0.0, 1.0);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 5.0 * x(i, 0) + 1.0 * x(i, 1) + rng.normal(0.0, 0.05);
    for (auto algorithm : {Algorithm::XGB, Algorithm::GBM}) {
      auto spec = RegressorSpec::defaults(algorithm, seed);
      spec.xgb.rounds = 30;
      spec.gbm.trees = 60;
      const auto r = gain_importance(fit(spec, x, y), names(4));
      CHECK(std::abs(sum(r.scores) - 1.0) < 1e-12);
      for (double s : r.scores) CHECK(s >= 0.0);
      CHECK(r.scores[0] > r.scores[1]);
      CHECK(r.method == (algorithm == Algorithm::XGB ? ImportanceMethod::GainXGB
                                                      : ImportanceMethod::GainGBM));
    }
  }
}

TEST_CASE("gain on a tree-free ensemble is flagged") {
  Rng rng(5);
  const Matrix x = random_matrix(30, 2, rng);
  const auto r = gain_importance(fit(small_xgb(5), x, std::vector<double>(30, 1.0)), names(2));
  CHECK(r.no_splits);
  CHECK(r.scores == std::vector<double>{0.0, 0.0});
}

TEST_CASE("rank_contributors breaks ties by name") {
  ImportanceReport r;
  r.features = {"c", "a", "b", "d"};
  r.scores = {0.5, 0.5, 0.9, 0.0};
  CHECK(rank_contributors(r) == std::vector<std::string>{"b", "a", "c", "d"});
}

TEST_CASE("permutation repeats, seeds and standard errors") {
  Rng rng(6);
  Matrix x = random_matrix(200, 2, rng, 0.0, 1.0);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = x(i, 0) + x(i, 1);
  const auto rf = fit(small_forest(6), x, y);
  const auto a = permutation_importance(rf, x, y, names(2), 5, 11);
  const auto b = permutation_importance(rf, x, y, names(2), 5, 11);
  CHECK(a.raw == b.raw);
  CHECK(a.std_error == b.std_error);
  const auto one = permutation_importance(rf, x, y, names(2), 1, 11);
  CHECK(one.std_error == std::vector<double>{0.0, 0.0});
  for (std::size_t j = 0; j < 2; ++j) CHECK(a.std_error[j] > 0.0);
  CHECK_THROWS_AS(permutation_importance(rf, x, y, names(2), 0, 1), ValidationError);
  CHECK_THROWS_AS(permutation_importance(rf, x, y, names(3), 3, 1), ValidationError);
  CHECK_THROWS_AS(gain_importance(rf, names(2)), ValidationError);
}

TEST_CASE("base learner equal to truth ranks first") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const std::size_t n = 300;
    const auto truth = random_vector(n, rng, 0.0, 100.0);
    Matrix x(n, 6);
    x.set_column(3, truth);
    for (std::size_t c : {0, 1, 2, 4, 5}) {
      auto col = truth;
      for (auto& v : col) v += rng.normal(0.0, 25.0);
      x.set_column(c, col);
    }
    std::vector<std::string> labels;
    for (auto a : kBaseLearners) labels.emplace_back(to_string(a));
    const auto rf = fit(small_forest(seed), x, truth);
    const auto perm = permutation_importance(rf, x, truth, labels, 5, seed);
    CHECK(rank_contributors(perm).front() == "GBM");
    const auto gain = gain_importance(fit(small_xgb(seed), x, truth), labels);
    CHECK(rank_contributors(gain).front() == "GBM");
  }
}

TEST_CASE("unused feature stays within sampling noise") {
  Rng rng(7);
  const std::size_t n = 300;
  Matrix x = random_matrix(n, 2, rng, 0.0, 1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 4.0 * x(i, 0);
  const auto rf = fit(small_forest(7), x, y);
  const auto r = permutation_importance(rf, x, y, names(2), 10, 7);
  // RF may still split on the noise column; its effect must be small
  // relative to the signal and consistent with zero at a few standard errors
  CHECK(r.scores[1] < 0.05 * r.scores[0]);
  CHECK(r.raw[1] <= 0.0 + 4.0 * r.std_error[1] + 0.02 * r.raw[0]);
}
