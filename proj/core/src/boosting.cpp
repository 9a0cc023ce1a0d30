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

#include <algorithm>
#include <numeric>

#include "fitters.hpp"

namespace gaugeblend::internal {
namespace {

double mean_squared(std::span<const double> y, std::span<const double> pred) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - pred[i]) * (y[i] - pred[i]);
  return s / static_cast<double>(y.size());
}

// Shared boosting loop for squared error: each round grows a tree on the
// residuals of a row sample and adds learning_rate * tree to the score.
BoostedModel boost(const Matrix& x, std::span<const double> y, std::size_t rounds,
                   double learning_rate, double subsample, const TreeGrowOptions& options,
                   std::uint64_t seed) {
  const std::size_t n = x.rows();
  BoostedModel model;
  model.criterion = options.criterion;
  model.learning_rate = learning_rate;
  model.base_score = stable_mean(y);
  model.trees.reserve(rounds);

  std::vector<double> pred(n, model.base_score);
  std::vector<double> residual(n);
  model.training_mse.push_back(mean_squared(y, pred));

  Rng rng(seed);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto sample_size = std::max<std::size_t>(
      1, std::min(n, static_cast<std::size_t>(subsample * static_cast<double>(n))));
  std::vector<std::size_t> rows;

  for (std::size_t t = 0; t < rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - pred[i];
    if (sample_size < n) {
      // Partial shuffle: the first sample_size entries are drawn without replacement.
      for (std::size_t k = 0; k < sample_size; ++k) {
        std::swap(all[k], all[k + rng.index(n - k)]);
      }
      rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(sample_size));
      std::sort(rows.begin(), rows.end());
    } else {
      rows = all;
    }
    RegressionTree tree = RegressionTree::grow(x, residual, rows, options, rng);
    for (std::size_t i = 0; i < n; ++i) pred[i] += learning_rate * tree.predict(x.row(i));
    model.trees.push_back(std::move(tree));
    model.training_mse.push_back(mean_squared(y, pred));
  }
  return model;
}

}  // namespace

BoostedModel fit_gbm(const Matrix& x, std::span<const double> y, const GbmParams& params,
                     std::uint64_t seed) {
  TreeGrowOptions options;
  options.criterion = SplitCriterion::Variance;
  options.max_depth = params.max_depth;
  options.min_leaf_size = params.min_leaf_size;
  options.min_split_size = 2 * params.min_leaf_size;
  return boost(x, y, params.trees, params.learning_rate, params.subsample, options, seed);
}

BoostedModel fit_xgb(const Matrix& x, std::span<const double> y, const XgbParams& params,
                     std::uint64_t seed) {
  TreeGrowOptions options;
  options.criterion = SplitCriterion::SecondOrder;
  options.max_depth = params.max_depth;
  options.lambda = params.lambda;
  options.min_gain = params.min_gain;
  options.min_leaf_size = 1;  // hessian is 1 per row, so min_child_weight = 1
  return boost(x, y, params.rounds, params.learning_rate, params.subsample, options, seed);
}

double predict_boosted(const BoostedModel& m, std::span<const double> row) {
  double out = m.base_score;
  for (const auto& tree : m.trees) out += m.learning_rate * tree.predict(row);
  return out;
}

}  // namespace gaugeblend::internal
