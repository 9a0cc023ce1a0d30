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

#include "gaugeblend/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaugeblend/error.hpp"
#include "gaugeblend/evaluation.hpp"
#include "gaugeblend/random.hpp"

namespace gaugeblend {

std::string_view to_string(ImportanceMethod method) {
  switch (method) {
    case ImportanceMethod::PermutationRF: return "permutation_rf";
    case ImportanceMethod::GainXGB: return "gain_xgb";
    case ImportanceMethod::GainGBM: return "gain_gbm";
  }
  return "?";
}

namespace {

void fill_ranks(ImportanceReport& report) {
  report.ranks = report.scores.empty()
                     ? std::vector<int>{}
                     : rank_values(report.scores, Direction::HigherIsBetter);
}

}  // namespace

ImportanceReport permutation_importance(const FittedRegressor& model, const Matrix& x,
                                        std::span<const double> y,
                                        std::vector<std::string> names, std::size_t repeats,
                                        std::uint64_t seed) {
  if (repeats < 1) throw ValidationError("permutation_importance: repeats must be >= 1");
  if (x.cols() != model.metadata().features) {
    throw ValidationError("permutation_importance: table width does not match the model");
  }
  if (names.size() != x.cols()) {
    throw ValidationError("permutation_importance: one name per column is required");
  }
  if (y.size() != x.rows()) {
    throw ValidationError("permutation_importance: target length mismatch");
  }

  const double baseline = mse(model.predict(x), y);
  ImportanceReport report;
  report.method = ImportanceMethod::PermutationRF;
  report.features = std::move(names);
  const std::size_t p = x.cols(), n = x.rows();
  report.raw.assign(p, 0.0);
  report.std_error.assign(p, 0.0);
  report.scores.assign(p, 0.0);

  Matrix shuffled = x;
  std::vector<double> diffs(repeats);
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < p; ++j) {
    const auto original = x.column(j);
    for (std::size_t r = 0; r < repeats; ++r) {
      Rng rng(mix_seed(seed ^ mix_seed(j * 1'000'003ULL + r)));
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      rng.shuffle(std::span<std::size_t>(perm));
      for (std::size_t i = 0; i < n; ++i) shuffled(i, j) = original[perm[i]];
      diffs[r] = mse(model.predict(shuffled), y) - baseline;
    }
    shuffled.set_column(j, original);
    const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) /
                        static_cast<double>(repeats);
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    report.raw[j] = mean;
    report.std_error[j] =
        repeats > 1 ? std::sqrt(ss / static_cast<double>(repeats - 1) /
                                static_cast<double>(repeats))
                    : 0.0;
    report.scores[j] = std::max(0.0, mean);
  }
  fill_ranks(report);
  return report;
}

ImportanceReport permutation_importance(const FittedRegressor& model, const FeatureTable& table,
                                        std::size_t repeats, std::uint64_t seed) {
  return permutation_importance(model, table.x, table.y, table.names, repeats, seed);
}

ImportanceReport gain_importance(const FittedRegressor& model, std::vector<std::string> names) {
  const auto* boosted = std::get_if<BoostedModel>(&model.state());
  if (boosted == nullptr) {
    throw ValidationError("gain_importance: model is not a boosted tree ensemble");
  }
  if (names.size() != model.metadata().features) {
    throw ValidationError("gain_importance: one name per feature is required");
  }
  ImportanceReport report;
  report.method = boosted->criterion == SplitCriterion::SecondOrder ? ImportanceMethod::GainXGB
                                                                    : ImportanceMethod::GainGBM;
  report.features = std::move(names);
  report.scores.assign(report.features.size(), 0.0);
  for (const auto& tree : boosted->trees) {
    for (const auto& node : tree.nodes()) {
      if (node.feature >= 0) report.scores[static_cast<std::size_t>(node.feature)] += node.gain;
    }
  }
  const double total = std::accumulate(report.scores.begin(), report.scores.end(), 0.0);
  if (total > 0.0) {
    for (double& s : report.scores) s /= total;
  } else {
    report.no_splits = true;
  }
  fill_ranks(report);
  return report;
}

std::vector<std::string> rank_contributors(const ImportanceReport& report) {
  std::vector<std::size_t> order(report.features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (report.scores[a] != report.scores[b]) return report.scores[a] > report.scores[b];
    return report.features[a] < report.features[b];
  });
  std::vector<std::string> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(report.features[i]);
  return out;
}

}  // namespace gaugeblend
