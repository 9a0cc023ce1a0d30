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

// Per-algorithm fitters behind gaugeblend::fit. Inputs are already
// validated: finite, n >= 2, widths consistent.

#ifndef GAUGEBLEND_SRC_FITTERS_HPP_
#define GAUGEBLEND_SRC_FITTERS_HPP_

#include <span>

#include "gaugeblend/learners.hpp"

namespace gaugeblend::internal {

LinearModel fit_linear(const Matrix& x, std::span<const double> y, FitMetadata& meta);
MarsModel fit_mars(const Matrix& x, std::span<const double> y, const MarsParams& params,
                   bool poly, FitMetadata& meta);
ForestModel fit_forest(const Matrix& x, std::span<const double> y, const ForestParams& params,
                       std::uint64_t seed, unsigned threads);
BoostedModel fit_gbm(const Matrix& x, std::span<const double> y, const GbmParams& params,
                     std::uint64_t seed);
BoostedModel fit_xgb(const Matrix& x, std::span<const double> y, const XgbParams& params,
                     std::uint64_t seed);
BrnnModel fit_brnn(const Matrix& x, std::span<const double> y, const BrnnParams& params,
                   std::uint64_t seed, FitMetadata& meta);

double predict_linear(const LinearModel& m, std::span<const double> row);
double predict_mars(const MarsModel& m, std::span<const double> row);
double predict_forest(const ForestModel& m, std::span<const double> row);
double predict_boosted(const BoostedModel& m, std::span<const double> row);
double predict_brnn(const BrnnModel& m, std::span<const double> row);

// Column means and standard deviations (population); zero spread maps to 1.
void column_standardization(const Matrix& x, std::vector<double>& center,
                            std::vector<double>& scale);

}  // namespace gaugeblend::internal

#endif  // GAUGEBLEND_SRC_FITTERS_HPP_
