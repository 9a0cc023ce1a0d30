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

#include "gaugeblend/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaugeblend/error.hpp"

namespace gaugeblend {
namespace {

void check_pair(std::span<const double> predictions, std::span<const double> truth,
                const char* what) {
  if (predictions.size() != truth.size()) {
    throw ValidationError(std::string(what) + ": prediction and truth lengths differ");
  }
  if (predictions.empty()) throw ValidationError(std::string(what) + ": empty input");
}

}  // namespace

double squared_error(double prediction, double truth) {
  if (!std::isfinite(prediction) || !std::isfinite(truth)) {
    throw ValidationError("squared_error: non-finite input");
  }
  const double d = prediction - truth;
  return d * d;
}

double mse(std::span<const double> predictions, std::span<const double> truth) {
  check_pair(predictions, truth, "mse");
  // Neumaier summation.
  double sum = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double v = squared_error(predictions[i], truth[i]);
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + carry) / static_cast<double>(truth.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median: empty input");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return (lower + upper) / 2.0;
}

double mdse(std::span<const double> predictions, std::span<const double> truth) {
  check_pair(predictions, truth, "mdse");
  std::vector<double> se(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) se[i] = squared_error(predictions[i], truth[i]);
  return median(std::move(se));
}

double skill_score(double mse_learner, double mse_benchmark) {
  if (!std::isfinite(mse_learner) || !std::isfinite(mse_benchmark)) {
    throw ValidationError("skill_score: non-finite input");
  }
  if (!(mse_benchmark > 0.0)) {
    throw NumericError("skill_score: benchmark MSE is zero, the ratio is undefined");
  }
  return 100.0 * (1.0 - mse_learner / mse_benchmark);
}

std::vector<int> rank_values(std::span<const double> metric, Direction direction) {
  if (metric.empty()) throw ValidationError("rank: no values");
  for (double v : metric) {
    if (!std::isfinite(v)) throw ValidationError("rank: non-finite metric");
  }
  std::vector<std::size_t> order(metric.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const bool lower = direction == Direction::LowerIsBetter;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lower ? metric[a] < metric[b] : metric[a] > metric[b];
  });
  std::vector<int> ranks(metric.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && metric[order[k]] == metric[order[k - 1]]) {
      ranks[order[k]] = ranks[order[k - 1]];
    } else {
      ranks[order[k]] = static_cast<int>(k) + 1;
    }
  }
  return ranks;
}

std::map<std::string, int> rank_learners(const std::map<std::string, double>& scores,
                                         Direction direction) {
  std::vector<double> values;
  for (const auto& [name, v] : scores) values.push_back(v);
  const auto ranks = rank_values(values, direction);
  std::map<std::string, int> out;
  std::size_t k = 0;
  for (const auto& [name, v] : scores) out[name] = ranks[k++];
  return out;
}

}  // namespace gaugeblend
