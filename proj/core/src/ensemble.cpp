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

#include "gaugeblend/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "gaugeblend/error.hpp"
#include "gaugeblend/evaluation.hpp"
#include "gaugeblend/tree.hpp"

namespace gaugeblend {

void PredictionMatrix::validate() const {
  if (values.cols() != kBaseLearners.size()) {
    throw ValidationError("prediction matrix: expected 6 base-learner columns, got " +
                          std::to_string(values.cols()));
  }
  if (learners.size() != values.cols()) {
    throw ValidationError("prediction matrix: learner labels do not match columns");
  }
  if (values.rows() == 0) throw ValidationError("prediction matrix: no rows");
  for (double v : values.values()) {
    if (!std::isfinite(v)) throw ValidationError("prediction matrix: non-finite prediction");
  }
}

std::string CombinerSpec::name() const {
  switch (kind) {
    case CombinerKind::Mean: return "Mean";
    case CombinerKind::Median: return "Median";
    case CombinerKind::BestMSE: return "BestMSE";
    case CombinerKind::BestMdSE: return "BestMdSE";
    case CombinerKind::Stack: return "Stack-" + std::string(to_string(meta));
  }
  return "?";
}

std::vector<CombinerSpec> CombinerSpec::all() {
  std::vector<CombinerSpec> out{{CombinerKind::Mean},
                                {CombinerKind::Median},
                                {CombinerKind::BestMSE},
                                {CombinerKind::BestMdSE}};
  for (Algorithm meta : {Algorithm::LR, Algorithm::MARS, Algorithm::PolyMARS, Algorithm::RF,
                         Algorithm::GBM, Algorithm::XGB, Algorithm::BRNN}) {
    out.push_back({CombinerKind::Stack, meta});
  }
  return out;
}

std::optional<CombinerSpec> combiner_from_name(std::string_view name) {
  for (const auto& spec : CombinerSpec::all()) {
    if (spec.name() == name) return spec;
  }
  return std::nullopt;
}

std::vector<double> combine_mean(const PredictionMatrix& preds) {
  preds.validate();
  std::vector<double> out(preds.rows());
  for (std::size_t i = 0; i < preds.rows(); ++i) {
    const auto row = preds.values.row(i);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    out[i] = std::clamp(stable_mean(row), *lo, *hi);
  }
  return out;
}

std::vector<double> combine_median(const PredictionMatrix& preds) {
  preds.validate();
  std::vector<double> out(preds.rows());
  for (std::size_t i = 0; i < preds.rows(); ++i) {
    const auto row = preds.values.row(i);
    out[i] = median(std::vector<double>(row.begin(), row.end()));
  }
  return out;
}

std::size_t select_best(const PredictionMatrix& preds, std::span<const double> truth,
                        SelectionCriterion criterion) {
  preds.validate();
  if (truth.size() != preds.rows()) {
    throw ValidationError("select_best: truth length does not match prediction rows");
  }
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t c = 0; c < preds.values.cols(); ++c) {
    const auto col = preds.values.column(c);
    const double score = criterion == SelectionCriterion::MSE ? mse(col, truth) : mdse(col, truth);
    if (c == 0 || score < best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

FittedCombiner FittedCombiner::simple(CombinerKind kind, std::vector<Algorithm> order) {
  FittedCombiner c;
  c.spec_ = {kind};
  c.order_ = std::move(order);
  return c;
}

FittedCombiner FittedCombiner::best(CombinerKind kind, std::size_t index,
                                    std::vector<Algorithm> order) {
  if (index >= order.size()) throw ValidationError("best learner: index out of range");
  FittedCombiner c;
  c.spec_ = {kind};
  c.order_ = std::move(order);
  c.selected_ = index;
  return c;
}

FittedCombiner FittedCombiner::stacked(FittedRegressor meta, std::vector<Algorithm> order) {
  if (meta.metadata().features != order.size()) {
    throw ValidationError("stacker: meta-model must take one feature per base learner");
  }
  FittedCombiner c;
  c.spec_ = {CombinerKind::Stack, meta.spec().algorithm};
  c.order_ = std::move(order);
  c.meta_ = std::move(meta);
  return c;
}

FittedCombiner fit_stacker(const RegressorSpec& meta, const PredictionMatrix& preds,
                           std::span<const double> truth, const FitOptions& options) {
  preds.validate();
  if (truth.size() != preds.rows()) {
    throw ValidationError("fit_stacker: truth length does not match prediction rows");
  }
  return FittedCombiner::stacked(fit(meta, preds.values, truth, options), preds.learners);
}

FittedCombiner fit_combiner(const CombinerSpec& spec, const PredictionMatrix& preds,
                            std::span<const double> truth, const RegressorSpec& meta,
                            const FitOptions& options) {
  switch (spec.kind) {
    case CombinerKind::Mean:
    case CombinerKind::Median:
      preds.validate();
      return FittedCombiner::simple(spec.kind, preds.learners);
    case CombinerKind::BestMSE:
      return FittedCombiner::best(spec.kind, select_best(preds, truth, SelectionCriterion::MSE),
                                  preds.learners);
    case CombinerKind::BestMdSE:
      return FittedCombiner::best(spec.kind, select_best(preds, truth, SelectionCriterion::MdSE),
                                  preds.learners);
    case CombinerKind::Stack:
      if (meta.algorithm != spec.meta) {
        throw ValidationError("fit_combiner: meta spec does not match " + spec.name());
      }
      return fit_stacker(meta, preds, truth, options);
  }
  throw ValidationError("fit_combiner: unknown combiner");
}

std::vector<double> predict_combiner(const FittedCombiner& combiner,
                                     const PredictionMatrix& preds) {
  preds.validate();
  if (preds.learners != combiner.learner_order()) {
    throw ValidationError("predict_combiner: base-learner column order differs from fitting");
  }
  switch (combiner.spec().kind) {
    case CombinerKind::Mean: return combine_mean(preds);
    case CombinerKind::Median: return combine_median(preds);
    case CombinerKind::BestMSE:
    case CombinerKind::BestMdSE: return preds.values.column(*combiner.selected());
    case CombinerKind::Stack: return combiner.meta_model()->predict(preds.values);
  }
  throw ValidationError("predict_combiner: unknown combiner");
}

}  // namespace gaugeblend
