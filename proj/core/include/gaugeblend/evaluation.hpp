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

#ifndef GAUGEBLEND_EVALUATION_HPP_
#define GAUGEBLEND_EVALUATION_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

namespace gaugeblend {

// S(x, y) = (x - y)^2 for prediction x and observed truth y.
double squared_error(double prediction, double truth);

double mse(std::span<const double> predictions, std::span<const double> truth);

// Median squared error; even counts take the midpoint of the central pair.
double mdse(std::span<const double> predictions, std::span<const double> truth);

// Relative skill in percent: 100 (1 - mse / mse_benchmark).
double skill_score(double mse_learner, double mse_benchmark);

// Median of a non-empty sample (midpoint convention for even sizes).
double median(std::vector<double> values);

enum class Direction { LowerIsBetter, HigherIsBetter };

// Competition ranks: best is 1, ties share the minimum rank.
std::vector<int> rank_values(std::span<const double> metric, Direction direction);
std::map<std::string, int> rank_learners(const std::map<std::string, double>& scores,
                                         Direction direction);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_EVALUATION_HPP_
