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

#include "gaugeblend/tree.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "gaugeblend/error.hpp"

namespace gaugeblend {

double stable_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double correction = 0.0;
  for (double v : values) correction += v - mean;
  return mean + correction / n;
}

namespace {

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double split_threshold(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  // Adjacent doubles: the midpoint may round up to `hi`.
  return mid < hi ? mid : lo;
}

}  // namespace

RegressionTree RegressionTree::grow(const Matrix& x, std::span<const double> target,
                                    std::span<const std::size_t> rows,
                                    const TreeGrowOptions& options, Rng& rng) {
  if (rows.empty()) throw ValidationError("tree: no rows to grow on");
  if (target.size() != x.rows()) throw ValidationError("tree: target length mismatch");

  const std::size_t p = x.cols();
  const bool second_order = options.criterion == SplitCriterion::SecondOrder;
  const double lambda = second_order ? options.lambda : 0.0;
  const std::size_t n_candidates =
      (options.candidates == 0 || options.candidates >= p) ? p : options.candidates;

  std::vector<std::size_t> idx(rows.begin(), rows.end());
  std::vector<Node> nodes;
  std::vector<int> features(p);
  std::iota(features.begin(), features.end(), 0);
  std::vector<std::pair<double, double>> sorted;  // (feature value, centered target)
  std::vector<double> local;

  struct Work {
    std::size_t node, begin, end;
    int depth;
  };
  std::vector<Work> stack;
  nodes.push_back({});
  stack.push_back({0, 0, idx.size(), 0});

  while (!stack.empty()) {
    const Work w = stack.back();
    stack.pop_back();
    const std::size_t n = w.end - w.begin;

    local.clear();
    for (std::size_t i = w.begin; i < w.end; ++i) local.push_back(target[idx[i]]);
    const double sum = std::accumulate(local.begin(), local.end(), 0.0);
    const double center = second_order ? 0.0 : stable_mean(local);
    {
      Node& node = nodes[w.node];
      node.count = n;
      node.value = second_order ? sum / (static_cast<double>(n) + lambda) : center;
    }

    if (n < options.min_split_size || n < 2 * options.min_leaf_size ||
        (options.max_depth >= 0 && w.depth >= options.max_depth)) {
      continue;
    }

    if (n_candidates < p) {
      // Partial Fisher-Yates: the first n_candidates entries are the sample.
      std::iota(features.begin(), features.end(), 0);
      for (std::size_t k = 0; k < n_candidates; ++k) {
        std::swap(features[k], features[k + rng.index(p - k)]);
      }
    }

    double parent_sum = 0.0;
    for (std::size_t i = w.begin; i < w.end; ++i) parent_sum += target[idx[i]] - center;
    const double parent_score =
        parent_sum * parent_sum / (static_cast<double>(n) + lambda);

    Candidate best;
    best.gain = options.min_gain;
    for (std::size_t k = 0; k < n_candidates; ++k) {
      const int f = features[k];
      sorted.clear();
      for (std::size_t i = w.begin; i < w.end; ++i) {
        sorted.emplace_back(x(idx[i], f), target[idx[i]] - center);
      }
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front().first == sorted.back().first) continue;

      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < options.min_leaf_size || n_right < options.min_leaf_size) continue;
        const double right_sum = parent_sum - left_sum;
        double gain = left_sum * left_sum / (static_cast<double>(n_left) + lambda) +
                      right_sum * right_sum / (static_cast<double>(n_right) + lambda) -
                      parent_score;
        if (second_order) gain *= 0.5;
        if (gain > best.gain) {
          best = {f, split_threshold(sorted[i].first, sorted[i + 1].first), gain};
        }
      }
    }
    if (best.feature < 0) continue;

    auto mid_it = std::stable_partition(
        idx.begin() + static_cast<std::ptrdiff_t>(w.begin),
        idx.begin() + static_cast<std::ptrdiff_t>(w.end),
        [&](std::size_t r) { return x(r, best.feature) <= best.threshold; });
    const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

    const auto left_id = static_cast<std::int32_t>(nodes.size());
    nodes.push_back({});
    const auto right_id = static_cast<std::int32_t>(nodes.size());
    nodes.push_back({});
    Node& node = nodes[w.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.gain = best.gain;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({static_cast<std::size_t>(right_id), mid, w.end, w.depth + 1});
    stack.push_back({static_cast<std::size_t>(left_id), w.begin, mid, w.depth + 1});
  }
  return RegressionTree(std::move(nodes));
}

double RegressionTree::predict(std::span<const double> features) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const Node& n = nodes_[i];
    i = static_cast<std::size_t>(features[static_cast<std::size_t>(n.feature)] <= n.threshold
                                     ? n.left
                                     : n.right);
  }
  return nodes_[i].value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

}  // namespace gaugeblend
