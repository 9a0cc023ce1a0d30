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

#ifndef GAUGEBLEND_PIPELINE_HPP_
#define GAUGEBLEND_PIPELINE_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeblend/ensemble.hpp"
#include "gaugeblend/features.hpp"
#include "gaugeblend/importance.hpp"
#include "gaugeblend/learners.hpp"

namespace gaugeblend {

inline constexpr int kReportFormatVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Library version string, e.g. "0.1.0".
std::string_view software_version();

// Random partition of row indices into thirds: d1 fits base learners, d2
// fits combiners, d3 is held out for evaluation.
struct SplitPlan {
  std::vector<std::size_t> d1, d2, d3;
  std::uint64_t seed = 0;
  bool operator==(const SplitPlan&) const = default;
};

// Seeded shuffle; the n mod 3 leftover rows go to d1, then d2.
SplitPlan split_three(std::size_t n, std::uint64_t seed);

// master XOR a stable hash of `tag`.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

struct ExperimentConfig {
  std::vector<PredictorSetId> sets{PredictorSetId::Set1, PredictorSetId::Set2,
                                   PredictorSetId::Set3};
  // One spec per entry of kBaseLearners, same order. Seeds are re-derived
  // from `seed` at run time.
  std::vector<RegressorSpec> base_learners;
  std::vector<CombinerSpec> combiners;
  std::uint64_t seed = kDefaultSeed;
  bool clip_at_zero = false;
  unsigned threads = 1;  // 0 = all cores; results do not depend on it
  bool audit = false;    // record which rows each stage touched
  std::function<void(std::string_view)> progress;

  static ExperimentConfig defaults(std::uint64_t seed = kDefaultSeed);
  void validate() const;
  // Meta-learner spec: the base-learner spec of the same algorithm, or the
  // default spec for LR.
  RegressorSpec meta_spec(Algorithm algorithm) const;
};

struct LearnerResult {
  std::string learner;
  PredictorSetId set = PredictorSetId::Set1;
  double mse = 0.0;
  double mdse = 0.0;
  std::optional<double> rs_type1;  // vs MARS on the same set
  std::optional<double> rs_type2;  // vs MARS on Set1
  int rank_type1 = 0;              // within the set
  int rank_type2 = 0;              // across all learners and sets
  double seconds = 0.0;
  std::optional<std::string> selected;  // Best*: chosen base learner
  bool operator==(const LearnerResult&) const = default;
};

struct SetSummary {
  PredictorSetId set = PredictorSetId::Set1;
  std::size_t rows = 0;
  DropReport drops;
  // MSE on d2 of the d1-trained base learners, the mean and median
  // combiners, and the LR stacker on its own training data.
  std::vector<std::pair<std::string, double>> d2_mse;
  bool type1_suppressed = false;
  bool operator==(const SetSummary&) const = default;
};

struct StageAccess {
  std::string stage;  // "fit_*" stages train something
  PredictorSetId set = PredictorSetId::Set1;
  std::vector<std::size_t> rows;
};

struct ExperimentReport {
  int format_version = kReportFormatVersion;
  std::string software_version;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::array<std::size_t, 3> split_sizes{};
  std::vector<std::string> learners;  // the 17 names, report order
  std::vector<LearnerResult> results;
  std::vector<SetSummary> summaries;
  std::map<std::string, std::uint64_t> seeds;
  bool type2_suppressed = false;
  std::vector<StageAccess> audit;  // not serialized

  const LearnerResult& result(std::string_view learner, PredictorSetId set) const;
  const SetSummary& summary(PredictorSetId set) const;
};

// The 17 learner names: the six base learners, then the 11 combiners.
std::vector<std::string> learner_names(const ExperimentConfig& config);

ExperimentReport run_experiment(const std::map<PredictorSetId, FeatureTable>& features,
                                const ExperimentConfig& config);

struct ImportanceRun {
  PredictorSetId set = PredictorSetId::Set1;
  std::string scope;  // "base_learners" or "predictors"
  ImportanceReport permutation;
  ImportanceReport gain;
};

// Base-learner contributions on d2 (RF permutation and XGB gain over the six
// d1-trained prediction columns) for every set, plus predictor relevance on
// d1+d2 for Set3 when present.
std::vector<ImportanceRun> run_importance(const std::map<PredictorSetId, FeatureTable>& features,
                                          const ExperimentConfig& config, std::size_t repeats);

}  // namespace gaugeblend

#endif  // GAUGEBLEND_PIPELINE_HPP_
