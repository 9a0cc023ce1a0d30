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

#ifndef GAUGEBLEND_ENSEMBLE_HPP_
#define GAUGEBLEND_ENSEMBLE_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaugeblend/learners.hpp"
#include "gaugeblend/matrix.hpp"

namespace gaugeblend {

// Base learners in the fixed column order of every prediction matrix.
inline constexpr std::array<Algorithm, 6> kBaseLearners{
    Algorithm::MARS, Algorithm::PolyMARS, Algorithm::RF,
    Algorithm::GBM,  Algorithm::XGB,      Algorithm::BRNN};

// One column of predictions per base learner, rows aligned with a table.
struct PredictionMatrix {
  Matrix values;
  std::vector<Algorithm> learners{kBaseLearners.begin(), kBaseLearners.end()};

  std::size_t rows() const { return values.rows(); }
  // Throws unless there are 6 columns in base-learner order, > 0 rows and
  // only finite entries.
  void validate() const;
};

enum class CombinerKind { Mean, Median, BestMSE, BestMdSE, Stack };
enum class SelectionCriterion { MSE, MdSE };

struct CombinerSpec {
  CombinerKind kind = CombinerKind::Mean;
  Algorithm meta = Algorithm::LR;  // Stack only

  std::string name() const;
  bool operator==(const CombinerSpec&) const = default;

  // The 11 combiners: Mean, Median, BestMSE, BestMdSE and one stacker per
  // meta-learner in {LR, MARS, PolyMARS, RF, GBM, XGB, BRNN}.
  static std::vector<CombinerSpec> all();
};

std::optional<CombinerSpec> combiner_from_name(std::string_view name);

std::vector<double> combine_mean(const PredictionMatrix& preds);
std::vector<double> combine_median(const PredictionMatrix& preds);

// Column minimizing the criterion against truth; ties go to the lower index.
std::size_t select_best(const PredictionMatrix& preds, std::span<const double> truth,
                        SelectionCriterion criterion);

class FittedCombiner {
 public:
  const CombinerSpec& spec() const { return spec_; }
  const std::vector<Algorithm>& learner_order() const { return order_; }
  std::optional<std::size_t> selected() const { return selected_; }
  const std::optional<FittedRegressor>& meta_model() const { return meta_; }

  static FittedCombiner simple(CombinerKind kind, std::vector<Algorithm> order);
  static FittedCombiner best(CombinerKind kind, std::size_t index, std::vector<Algorithm> order);
  static FittedCombiner stacked(FittedRegressor meta, std::vector<Algorithm> order);

 private:
  CombinerSpec spec_;
  std::vector<Algorithm> order_;
  std::optional<std::size_t> selected_;
  std::optional<FittedRegressor> meta_;
};

// Trains a meta-learner whose only features are the six prediction columns.
FittedCombiner fit_stacker(const RegressorSpec& meta, const PredictionMatrix& preds,
                           std::span<const double> truth, const FitOptions& options = {});

// Fits any of the 11 combiners on dataset-2 predictions. `meta` is used by
// Stack combiners and must name the same algorithm as spec.meta.
FittedCombiner fit_combiner(const CombinerSpec& spec, const PredictionMatrix& preds,
                            std::span<const double> truth, const RegressorSpec& meta,
                            const FitOptions& options = {});

std::vector<double> predict_combiner(const FittedCombiner& combiner,
                                     const PredictionMatrix& preds);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_ENSEMBLE_HPP_
