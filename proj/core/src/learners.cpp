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

#include "gaugeblend/learners.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include "fitters.hpp"
#include "gaugeblend/error.hpp"

namespace gaugeblend {
namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kAlgorithmNames{{
    {Algorithm::LR, "LR"},
    {Algorithm::MARS, "MARS"},
    {Algorithm::PolyMARS, "PolyMARS"},
    {Algorithm::RF, "RF"},
    {Algorithm::GBM, "GBM"},
    {Algorithm::XGB, "XGB"},
    {Algorithm::BRNN, "BRNN"},
}};

void require_finite(const Matrix& x, std::string_view what) {
  for (double v : x.values()) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": non-finite feature value");
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& [a, name] : kAlgorithmNames) {
    if (a == algorithm) return name;
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  for (const auto& [a, n] : kAlgorithmNames) {
    if (n == name) return a;
  }
  return std::nullopt;
}

RegressorSpec RegressorSpec::defaults(Algorithm algorithm, std::uint64_t seed) {
  RegressorSpec spec;
  spec.algorithm = algorithm;
  spec.seed = seed;
  return spec;
}

bool RegressorSpec::operator==(const RegressorSpec& o) const {
  auto tie = [](const RegressorSpec& s) {
    return std::tie(s.algorithm, s.mars.max_terms, s.mars.max_knots, s.mars.penalty,
                    s.mars.min_rsq_gain, s.forest.trees, s.forest.candidates,
                    s.forest.min_node_size, s.forest.bootstrap, s.gbm.trees,
                    s.gbm.learning_rate, s.gbm.max_depth, s.gbm.subsample, s.gbm.min_leaf_size,
                    s.xgb.rounds, s.xgb.learning_rate, s.xgb.max_depth, s.xgb.lambda,
                    s.xgb.min_gain, s.xgb.subsample, s.brnn.hidden, s.brnn.max_steps,
                    s.brnn.tolerance, s.brnn.evidence_every, s.brnn.initial_alpha,
                    s.brnn.initial_beta, s.seed, s.clip_at_zero);
  };
  return tie(*this) == tie(o);
}

FittedRegressor fit(const RegressorSpec& spec, const Matrix& x, std::span<const double> y,
                    const FitOptions& options) {
  const std::size_t n = x.rows(), p = x.cols();
  if (y.size() != n) throw ValidationError("fit: target length does not match row count");
  if (n < 2) throw ValidationError("fit: at least 2 rows are required");
  if (p == 0) throw ValidationError("fit: no features");
  require_finite(x, "fit");
  for (double v : y) {
    if (!std::isfinite(v)) throw ValidationError("fit: non-finite target value");
  }
  if (spec.algorithm == Algorithm::LR && n < p + 1) {
    throw ValidationError("fit: LR needs at least p + 1 rows");
  }

  FitMetadata meta;
  meta.rows = n;
  meta.features = p;
  const auto start = std::chrono::steady_clock::now();
  ModelState state = [&]() -> ModelState {
    switch (spec.algorithm) {
      case Algorithm::LR: return internal::fit_linear(x, y, meta);
      case Algorithm::MARS: return internal::fit_mars(x, y, spec.mars, false, meta);
      case Algorithm::PolyMARS: return internal::fit_mars(x, y, spec.mars, true, meta);
      case Algorithm::RF:
        return internal::fit_forest(x, y, spec.forest, spec.seed, options.threads);
      case Algorithm::GBM: return internal::fit_gbm(x, y, spec.gbm, spec.seed);
      case Algorithm::XGB: return internal::fit_xgb(x, y, spec.xgb, spec.seed);
      case Algorithm::BRNN: return internal::fit_brnn(x, y, spec.brnn, spec.seed, meta);
    }
    throw ValidationError("fit: unknown algorithm");
  }();
  meta.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return FittedRegressor(spec, meta, std::move(state));
}

FittedRegressor fit(const RegressorSpec& spec, const FeatureTable& table,
                    const FitOptions& options) {
  return fit(spec, table.x, table.y, options);
}

double FittedRegressor::predict_row(std::span<const double> features) const {
  if (features.size() != meta_.features) {
    throw ValidationError("predict: row has " + std::to_string(features.size()) +
                          " features, model expects " + std::to_string(meta_.features));
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw ValidationError("predict: non-finite feature value");
  }
  const double out = std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) return internal::predict_linear(m, features);
        if constexpr (std::is_same_v<T, MarsModel>) return internal::predict_mars(m, features);
        if constexpr (std::is_same_v<T, ForestModel>) return internal::predict_forest(m, features);
        if constexpr (std::is_same_v<T, BoostedModel>) return internal::predict_boosted(m, features);
        if constexpr (std::is_same_v<T, BrnnModel>) return internal::predict_brnn(m, features);
      },
      state_);
  if (!std::isfinite(out)) throw NumericError("predict: model produced a non-finite value");
  return spec_.clip_at_zero ? std::max(0.0, out) : out;
}

std::vector<double> FittedRegressor::predict(const Matrix& rows) const {
  if (rows.cols() != meta_.features) {
    throw ValidationError("predict: table has " + std::to_string(rows.cols()) +
                          " features, model expects " + std::to_string(meta_.features));
  }
  std::vector<double> out(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) out[i] = predict_row(rows.row(i));
  return out;
}

std::vector<double> predict(const FittedRegressor& model, const Matrix& rows) {
  return model.predict(rows);
}

}  // namespace gaugeblend
