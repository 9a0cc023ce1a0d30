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
#include <variant>
#include <vector>

#include "fixtures.hpp"
#include "gaugeblend/learners.hpp"
#include "gaugeblend/tree.hpp"

using namespace gaugeblend;
using gaugeblend::testing::random_matrix;

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

const ForestModel& forest(const FittedRegressor& m) { return std::get<ForestModel>(m.state()); }

}  // namespace

TEST_CASE("variance tree on a step") {
  Matrix x(4, 1, std::vector<double>{1, 2, 3, 4});
  const std::vector<double> y{0, 0, 10, 10};
  Rng rng(1);
  const auto tree = RegressionTree::grow(x, y, all_rows(4), {}, rng);
  REQUIRE(tree.nodes().size() == 3);
  const auto& root = tree.nodes()[0];
  CHECK(root.feature == 0);
  CHECK(root.threshold == 2.5);  // midpoint
  CHECK(root.gain == doctest::Approx(100.0));
  CHECK(tree.predict(std::vector<double>{2.5}) == 0.0);  // <= goes left
  CHECK(tree.predict(std::vector<double>{2.6}) == 10.0);
  CHECK(tree.leaf_count() == 2);
  CHECK(tree.split_count() == 1);
}

TEST_CASE("second-order tree leaves are S / (n + lambda)") {
  Matrix x(5, 1, std::vector<double>{0, 0, 1, 1, 1});
  const std::vector<double> residual{-1, -2, 3, 4, 5};
  TreeGrowOptions opt;
  opt.criterion = SplitCriterion::SecondOrder;
  opt.lambda = 1.0;
  opt.max_depth = 1;
  Rng rng(1);
  const auto tree = RegressionTree::grow(x, residual, all_rows(5), opt, rng);
  CHECK(tree.predict(std::vector<double>{0.0}) == doctest::Approx(-3.0 / 3.0));
  CHECK(tree.predict(std::vector<double>{1.0}) == doctest::Approx(12.0 / 4.0));
  const double gain = 0.5 * (9.0 / 3.0 + 144.0 / 4.0 - 81.0 / 6.0);
  CHECK(tree.nodes()[0].gain == doctest::Approx(gain));
}

TEST_CASE("tree growth limits") {
  Rng rng(5);
  const Matrix x = random_matrix(200, 3, rng);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = x(i, 0) + rng.normal(0.0, 0.1);
  TreeGrowOptions opt;
  opt.max_depth = 2;
  auto tree = RegressionTree::grow(x, y, all_rows(200), opt, rng);
  CHECK(tree.leaf_count() <= 4);
  opt = {};
  opt.min_leaf_size = 30;
  tree = RegressionTree::grow(x, y, all_rows(200), opt, rng);
  for (const auto& node : tree.nodes()) CHECK(node.count >= 30);
  opt = {};
  opt.min_split_size = 50;
  tree = RegressionTree::grow(x, y, all_rows(200), opt, rng);
  for (const auto& node : tree.nodes()) {
    if (node.feature >= 0) CHECK(node.count >= 50);
  }
}

TEST_CASE("RF with one tree, no bootstrap and all candidates is a single tree") {
  Rng rng(6);
  const Matrix x = random_matrix(150, 4, rng);
  std::vector<double> y(150);
  for (std::size_t i = 0; i < 150; ++i) y[i] = std::sin(3.0 * x(i, 0)) + x(i, 1) * x(i, 2);
  auto spec = RegressorSpec::defaults(Algorithm::RF, 9);
  spec.forest.trees = 1;
  spec.forest.bootstrap = false;
  spec.forest.candidates = 4;
  const auto rf = fit(spec, x, y);

  TreeGrowOptions opt;
  opt.min_split_size = spec.forest.min_node_size + 1;
  Rng tree_rng(0);
  const auto tree = RegressionTree::grow(x, y, all_rows(150), opt, tree_rng);
  CHECK(forest(rf).trees[0] == tree);
  const Matrix probe = random_matrix(100, 4, rng);
  for (std::size_t i = 0; i < probe.rows(); ++i) {
    CHECK(rf.predict_row(probe.row(i)) == tree.predict(probe.row(i)));
  }
}

TEST_CASE("RF node size follows the 'split only above min_node_size' rule") {
  Matrix x(5, 1, std::vector<double>{1, 2, 3, 4, 5});
  auto spec = RegressorSpec::defaults(Algorithm::RF);
  spec.forest.trees = 1;
  spec.forest.bootstrap = false;
  const auto five = fit(spec, x, std::vector<double>{1, 2, 3, 4, 5});
  CHECK(forest(five).trees[0].leaf_count() == 1);
  Matrix x6(6, 1, std::vector<double>{1, 2, 3, 4, 5, 6});
  const auto six = fit(spec, x6, std::vector<double>{1, 2, 3, 4, 5, 6});
  CHECK(forest(six).trees[0].leaf_count() > 1);
}

TEST_CASE("RF predictions stay inside the training target range") {
  Rng rng(7);
  const Matrix x = random_matrix(300, 5, rng);
  std::vector<double> y(300);
  for (auto& v : y) v = rng.uniform(10.0, 20.0);
  const auto rf = fit(RegressorSpec::defaults(Algorithm::RF, 3), x, y);
  const auto lo = *std::min_element(y.begin(), y.end());
  const auto hi = *std::max_element(y.begin(), y.end());
  const auto pred = rf.predict(random_matrix(500, 5, rng, -3.0, 3.0));
  for (double v : pred) {
    CHECK(v >= lo);
    CHECK(v <= hi);
  }
}

TEST_CASE("RF constant target is exact") {
  Rng rng(8);
  const Matrix x = random_matrix(60, 3, rng);
  const std::vector<double> y(60, 3.3);
  auto spec = RegressorSpec::defaults(Algorithm::RF, 1);
  spec.forest.trees = 50;
  for (double v : fit(spec, x, y).predict(x)) CHECK(v == 3.3);
}

TEST_CASE("RF is deterministic and independent of the thread count") {
  Rng rng(9);
  const Matrix x = random_matrix(200, 6, rng);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = x(i, 0) - x(i, 3) + rng.normal(0.0, 0.2);
  auto spec = RegressorSpec::defaults(Algorithm::RF, 77);
  spec.forest.trees = 60;
  const auto a = fit(spec, x, y, {1});
  const auto b = fit(spec, x, y, {4});
  CHECK(a.state() == b.state());
  spec.seed = 78;
  CHECK_FALSE(fit(spec, x, y).state() == a.state());
}
