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

#ifndef GAUGEBLEND_IMPORTANCE_HPP_
#define GAUGEBLEND_IMPORTANCE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeblend/features.hpp"
#include "gaugeblend/learners.hpp"

namespace gaugeblend {

enum class ImportanceMethod { PermutationRF, GainXGB, GainGBM };

std::string_view to_string(ImportanceMethod method);

struct ImportanceReport {
  ImportanceMethod method = ImportanceMethod::PermutationRF;
  std::vector<std::string> features;
  std::vector<double> scores;      // reported, non-negative
  std::vector<int> ranks;          // 1 = most important, ties share
  // Permutation only: mean MSE increase before clamping, and its standard
  // error over the repeats.
  std::vector<double> raw;
  std::vector<double> std_error;
  bool no_splits = false;  // gain: the ensemble never split
};

// Mean increase of MSE over `repeats` seeded permutations of each column,
// clamped below at 0 for `scores`.
ImportanceReport permutation_importance(const FittedRegressor& model, const Matrix& x,
                                        std::span<const double> y,
                                        std::vector<std::string> names, std::size_t repeats,
                                        std::uint64_t seed);
ImportanceReport permutation_importance(const FittedRegressor& model, const FeatureTable& table,
                                        std::size_t repeats, std::uint64_t seed);

// Total split gain per feature over all trees, as fractions of the total.
ImportanceReport gain_importance(const FittedRegressor& model, std::vector<std::string> names);

// Features by descending score, ties by name.
std::vector<std::string> rank_contributors(const ImportanceReport& report);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_IMPORTANCE_HPP_
