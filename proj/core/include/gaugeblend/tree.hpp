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

#ifndef GAUGEBLEND_TREE_HPP_
#define GAUGEBLEND_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gaugeblend/matrix.hpp"
#include "gaugeblend/random.hpp"

namespace gaugeblend {

// How a split is scored and how leaves are valued, for squared-error loss.
//   Variance:    gain = SSE reduction, leaf = mean target.
//   SecondOrder: gain = 1/2 [G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)],
//                leaf = -G/(H+l), with g = prediction - target and h = 1.
enum class SplitCriterion { Variance, SecondOrder };

struct TreeGrowOptions {
  SplitCriterion criterion = SplitCriterion::Variance;
  int max_depth = -1;                 // -1: unlimited
  std::size_t min_split_size = 2;     // nodes with fewer rows stay leaves
  std::size_t min_leaf_size = 1;      // each child must keep this many rows
  std::size_t candidates = 0;         // features tried per node; 0 = all
  double lambda = 0.0;                // L2 leaf penalty (SecondOrder only)
  double min_gain = 0.0;              // split only if gain > min_gain
};

class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;  // x[feature] <= threshold goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf output (unscaled)
    double gain = 0.0;   // loss reduction of this split
    std::size_t count = 0;
    bool operator==(const Node&) const = default;
  };

  RegressionTree() = default;
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  // Grows a tree on `rows` (may repeat, e.g. a bootstrap sample) against
  // `target`, which holds the response for Variance or the negative gradient
  // (residual) for SecondOrder. `rng` is used only when candidates < p.
  static RegressionTree grow(const Matrix& x, std::span<const double> target,
                             std::span<const std::size_t> rows,
                             const TreeGrowOptions& options, Rng& rng);

  double predict(std::span<const double> features) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t leaf_count() const;
  std::size_t split_count() const { return nodes_.size() - leaf_count(); }

  bool operator==(const RegressionTree&) const = default;

 private:
  std::vector<Node> nodes_;
};

// Mean with one compensating pass; exact for constant input.
double stable_mean(std::span<const double> values);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_TREE_HPP_
