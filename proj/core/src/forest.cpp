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
#include "gaugeblend/parallel.hpp"

namespace gaugeblend::internal {

ForestModel fit_forest(const Matrix& x, std::span<const double> y, const ForestParams& params,
                       std::uint64_t seed, unsigned threads) {
  const std::size_t n = x.rows(), p = x.cols();
  ForestModel model;
  model.trees.resize(params.trees);
  model.target_min = *std::min_element(y.begin(), y.end());
  model.target_max = *std::max_element(y.begin(), y.end());

  TreeGrowOptions options;
  options.criterion = SplitCriterion::Variance;
  options.candidates = params.candidates > 0 ? params.candidates : std::max<std::size_t>(1, p / 3);
  // Nodes with at most min_node_size rows are terminal.
  options.min_split_size = params.min_node_size + 1;
  options.min_leaf_size = 1;

  parallel_for(params.trees, threads, [&](std::size_t t) {
    Rng rng(seed ^ static_cast<std::uint64_t>(t));
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = rng.index(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.trees[t] = RegressionTree::grow(x, y, rows, options, rng);
  });
  return model;
}

double predict_forest(const ForestModel& m, std::span<const double> row) {
  if (m.trees.empty()) return m.target_min;
  double sum = 0.0;
  for (const auto& tree : m.trees) sum += tree.predict(row);
  // A mean of leaf means; clamping only absorbs rounding.
  return std::clamp(sum / static_cast<double>(m.trees.size()), m.target_min, m.target_max);
}

}  // namespace gaugeblend::internal
